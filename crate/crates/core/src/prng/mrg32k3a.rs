//! L'Ecuyer's combined multiple recursive generator MRG32k3a.

const M1: u64 = 4_294_967_087;
const M2: u64 = 4_294_944_443;
const A12: u64 = 1_403_580;
const A13N: u64 = 810_728;
const A21: u64 = 527_612;
const A23N: u64 = 1_370_589;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mrg32k3a {
    s1: [u64; 3],
    s2: [u64; 3],
}

impl Mrg32k3a {
    /// Modulus of the first component; the combined output `z` lies in
    /// `[1, M1]`.
    pub const MODULUS: u64 = M1;

    /// State `[s10, s11, s12, s20, s21, s22]`. The first three must be
    /// below `m1` and not all zero, the last three below `m2` and not all
    /// zero.
    pub fn from_state(state: [u32; 6]) -> Option<Self> {
        let s1 = [state[0], state[1], state[2]].map(u64::from);
        let s2 = [state[3], state[4], state[5]].map(u64::from);
        let ok1 = s1.iter().all(|&v| v < M1) && s1.iter().any(|&v| v != 0);
        let ok2 = s2.iter().all(|&v| v < M2) && s2.iter().any(|&v| v != 0);
        (ok1 && ok2).then_some(Mrg32k3a { s1, s2 })
    }

    /// State words drawn from splitmix64 of `seed`.
    pub fn from_u64(seed: u64) -> Self {
        let mut sm = super::split::SplitMix64::new(seed);
        let mut s1 = [0u64; 3].map(|_| sm.next_u64() % M1);
        let mut s2 = [0u64; 3].map(|_| sm.next_u64() % M2);
        if s1 == [0; 3] {
            s1[0] = 1;
        }
        if s2 == [0; 3] {
            s2[0] = 1;
        }
        Mrg32k3a { s1, s2 }
    }

    /// Combined output `z` in `[1, m1]`.
    pub fn next_raw(&mut self) -> u64 {
        let p1 = ((A12 as u128 * self.s1[1] as u128 + (M1 - A13N) as u128 * self.s1[0] as u128)
            % M1 as u128) as u64;
        self.s1 = [self.s1[1], self.s1[2], p1];
        let p2 = ((A21 as u128 * self.s2[2] as u128 + (M2 - A23N) as u128 * self.s2[0] as u128)
            % M2 as u128) as u64;
        self.s2 = [self.s2[1], self.s2[2], p2];
        if p1 > p2 {
            p1 - p2
        } else {
            p1 + M1 - p2
        }
    }

    /// Uniform on `(0, 1]` as `z / (m1 + 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.next_raw() as f64 / (M1 + 1) as f64
    }

    /// The output scaled to 32 bits, `floor(z 2^32 / (m1 + 1))`.
    pub fn next_u32(&mut self) -> u32 {
        ((self.next_raw() << 32) / (M1 + 1)) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_first_outputs() {
        let mut g = Mrg32k3a::from_state([12345; 6]).unwrap();
        assert_eq!(g.next_raw(), 545_508_589);
        assert_eq!(g.next_raw(), 1_368_065_410);
        assert_eq!(g.next_raw(), 1_327_943_761);
        let mut g = Mrg32k3a::from_state([12345; 6]).unwrap();
        assert!((g.next_f64() - 0.127011122046577).abs() < 1e-14);
        let mut g = Mrg32k3a::from_state([12345; 6]).unwrap();
        assert_eq!(g.next_u32(), 545_508_615);
    }

    #[test]
    fn large_states_do_not_overflow() {
        let mut g = Mrg32k3a::from_state([
            4_294_967_000,
            4_294_966_000,
            4_294_965_000,
            4_294_944_000,
            4_294_943_000,
            4_294_942_000,
        ])
        .unwrap();
        assert_eq!(g.next_raw(), 3_521_616_796);
        assert_eq!(g.next_raw(), 3_834_423_769);
        assert_eq!(g.next_raw(), 2_215_791_713);
    }

    #[test]
    fn invalid_states() {
        assert!(Mrg32k3a::from_state([0, 0, 0, 1, 1, 1]).is_none());
        assert!(Mrg32k3a::from_state([1, 1, 1, 0, 0, 0]).is_none());
        assert!(Mrg32k3a::from_state([u32::MAX, 1, 1, 1, 1, 1]).is_none());
    }

    #[test]
    fn raw_output_range() {
        let mut g = Mrg32k3a::from_u64(7);
        for _ in 0..100_000 {
            let z = g.next_raw();
            assert!((1..=M1).contains(&z));
        }
    }
}
