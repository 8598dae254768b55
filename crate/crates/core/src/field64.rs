//! Arithmetic in GF(2^64).
//!
//! Elements are polynomials over GF(2) of degree < 64, stored little-endian
//! in a `u64` (bit `i` is the coefficient of `x^i`), and reduced modulo
//! `x^64 + x^4 + x^3 + x + 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use rand::RngCore;

/// Low 64 bits of the reduction polynomial `x^64 + x^4 + x^3 + x + 1`.
pub const MODULUS_LOW: u64 = 0b1_1011;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElem(pub u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub const fn new(bits: u64) -> Self {
        FieldElem(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Draws an element uniformly from all 2^64 values.
    pub fn sample_uniform<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        FieldElem(rng.next_u64())
    }

    #[inline]
    pub fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, mut exp: u128) -> Self {
        let mut base = self;
        let mut acc = FieldElem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^64 - 2)`. Returns `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 2^64 - 2 = 2 + 4 + ... + 2^63
        let mut acc = FieldElem::ONE;
        let mut p = self;
        for _ in 1..64 {
            p = p.square();
            acc *= p;
        }
        Some(acc)
    }

    /// 16 lowercase hex digits, most significant coefficient first.
    pub fn to_hex(self) -> String {
        format!("{:016x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if s.len() != 16 {
            return None;
        }
        u64::from_str_radix(s, 16).ok().map(FieldElem)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({})", self.to_hex())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[inline]
pub fn add(a: FieldElem, b: FieldElem) -> FieldElem {
    FieldElem(a.0 ^ b.0)
}

/// Field product. Uses the carryless-multiply instruction when the CPU has
/// one, otherwise the portable routine; both give identical results.
#[inline]
pub fn mul(a: FieldElem, b: FieldElem) -> FieldElem {
    #[cfg(target_arch = "x86_64")]
    {
        if hw::available() {
            // SAFETY: feature presence checked at runtime.
            return unsafe { hw::mul(a, b) };
        }
    }
    mul_portable(a, b)
}

/// Shift-XOR carryless product followed by reduction.
pub fn mul_portable(a: FieldElem, b: FieldElem) -> FieldElem {
    let (lo, hi) = clmul_portable(a.0, b.0);
    FieldElem(reduce(lo, hi))
}

/// Hardware path, if compiled in and supported by the running CPU.
pub fn mul_hardware(a: FieldElem, b: FieldElem) -> Option<FieldElem> {
    #[cfg(target_arch = "x86_64")]
    {
        if hw::available() {
            // SAFETY: feature presence checked at runtime.
            return Some(unsafe { hw::mul(a, b) });
        }
    }
    let _ = (a, b);
    None
}

#[inline]
fn clmul_portable(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        rest &= rest - 1;
    }
    (lo, hi)
}

/// Reduces the 128-bit value `hi·x^64 + lo` modulo the field polynomial.
#[inline]
fn reduce(lo: u64, hi: u64) -> u64 {
    // x^64 = x^4 + x^3 + x + 1. Fold hi once; the overflow of that fold has
    // degree < 4 and folds again without further overflow.
    let spill = (hi >> 60) ^ (hi >> 61) ^ (hi >> 63);
    let folded = hi ^ spill;
    lo ^ folded ^ (folded << 1) ^ (folded << 3) ^ (folded << 4)
}

#[cfg(target_arch = "x86_64")]
mod hw {
    use super::{reduce, FieldElem};
    use std::arch::x86_64::{
        _mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_set_epi64x, _mm_srli_si128,
    };

    #[inline]
    pub(super) fn available() -> bool {
        std::arch::is_x86_feature_detected!("pclmulqdq")
            && std::arch::is_x86_feature_detected!("sse2")
    }

    #[target_feature(enable = "pclmulqdq,sse2")]
    pub(super) unsafe fn mul(a: FieldElem, b: FieldElem) -> FieldElem {
        let va = _mm_set_epi64x(0, a.0 as i64);
        let vb = _mm_set_epi64x(0, b.0 as i64);
        let prod = _mm_clmulepi64_si128(va, vb, 0x00);
        let lo = _mm_cvtsi128_si64(prod) as u64;
        let hi = _mm_cvtsi128_si64(_mm_srli_si128(prod, 8)) as u64;
        FieldElem(reduce(lo, hi))
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        add(self, rhs)
    }
}

impl AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElem) {
        *self = add(*self, rhs);
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn mul(self, rhs: FieldElem) -> FieldElem {
        mul(self, rhs)
    }
}

impl MulAssign for FieldElem {
    #[inline]
    fn mul_assign(&mut self, rhs: FieldElem) {
        *self = mul(*self, rhs);
    }
}

impl std::iter::Sum for FieldElem {
    fn sum<I: Iterator<Item = FieldElem>>(iter: I) -> FieldElem {
        iter.fold(FieldElem::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Interleaved multiply-and-reduce, one bit of `b` at a time.
    fn schoolbook(a: u64, b: u64) -> u64 {
        let mut acc = 0u64;
        let mut cur = a;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                acc ^= cur;
            }
            let carry = cur >> 63;
            cur <<= 1;
            if carry == 1 {
                cur ^= MODULUS_LOW;
            }
        }
        acc
    }

    #[test]
    fn add_examples() {
        let a = FieldElem(0xdead_beef_0123_4567);
        assert_eq!(add(FieldElem::ZERO, a), a);
        assert_eq!(add(a, a), FieldElem::ZERO);
        assert_eq!(add(FieldElem(0b1010), FieldElem(0b0110)), FieldElem(0b1100));
    }

    #[test]
    fn mul_examples() {
        let a = FieldElem(0x0123_4567_89ab_cdef);
        assert_eq!(mul(a, FieldElem::ONE), a);
        assert_eq!(mul(FieldElem(0b10), FieldElem(0b10)), FieldElem(0b100));
        // x^63 * x = x^64 = x^4 + x^3 + x + 1
        assert_eq!(
            mul(FieldElem(1 << 63), FieldElem(2)),
            FieldElem(MODULUS_LOW)
        );
    }

    #[test]
    fn mul_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let (a, b) = (rng.gen::<u64>(), rng.gen::<u64>());
            let want = schoolbook(a, b);
            assert_eq!(mul_portable(FieldElem(a), FieldElem(b)).0, want);
            assert_eq!(mul(FieldElem(a), FieldElem(b)).0, want);
        }
        for (a, b) in [
            (u64::MAX, u64::MAX),
            (u64::MAX, 1 << 63),
            (1 << 63, 1 << 63),
        ] {
            assert_eq!(mul_portable(FieldElem(a), FieldElem(b)).0, schoolbook(a, b));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(FieldElem::ZERO.inverse(), None);
        for _ in 0..200 {
            let a = FieldElem(rng.gen::<u64>() | 1);
            assert_eq!(a * a.inverse().unwrap(), FieldElem::ONE);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = FieldElem::sample_uniform(&mut ChaCha8Rng::seed_from_u64(42));
        let b = FieldElem::sample_uniform(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        let distinct: std::collections::HashSet<u64> = (0..1000u64)
            .map(|s| FieldElem::sample_uniform(&mut ChaCha8Rng::seed_from_u64(s)).0)
            .collect();
        assert_eq!(distinct.len(), 1000);
    }

    #[test]
    fn hex_format() {
        assert_eq!(FieldElem(0xab).to_hex(), "00000000000000ab");
        assert_eq!(
            FieldElem::from_hex("00000000000000ab"),
            Some(FieldElem(0xab))
        );
        assert_eq!(FieldElem::from_hex("ab"), None);
    }
}
