//! Fixed-precision binary big-floats and complex arithmetic.
//!
//! Values are m·2^e with a mantissa capped at [`PREC`] bits (truncating).
//! This kernel backs the numerical embedding of cyclotomic numbers and the
//! Aberth root finder; all *decisions* stay exact (rational certification in
//! `algnum`), so float rounding here can only slow convergence, never flip
//! an answer.

use crate::scalar::Rat;
use crate::upoly::UPoly;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::cmp::Ordering;

/// Working mantissa precision in bits (~77 decimal digits).
pub const PREC: u64 = 256;

#[derive(Clone, Debug)]
pub struct BF {
    m: BigInt,
    e: i64,
}

impl BF {
    pub fn zero() -> Self {
        BF { m: BigInt::zero(), e: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        BF { m: BigInt::from(n), e: 0 }.normalized()
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BF { m: n, e: 0 }.normalized()
    }

    pub fn from_rat(r: &Rat) -> Self {
        BF::from_bigint(r.numer().clone()).div(&BF::from_bigint(r.denom().clone()))
    }

    /// Exact rational value of the float.
    pub fn to_rat(&self) -> Rat {
        if self.e >= 0 {
            Rat::from_integer(&self.m << self.e as usize)
        } else {
            Rat::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let bits = self.m.bits() as i64;
        let excess = bits - PREC as i64;
        if excess > 0 {
            self.m >>= excess as usize;
            self.e += excess;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BF { m: -self.m.clone(), e: self.e }
    }

    pub fn abs(&self) -> Self {
        BF { m: self.m.abs(), e: self.e }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.e >= rhs.e { (self, rhs) } else { (rhs, self) };
        let gap = hi.e - lo.e;
        if gap > PREC as i64 + 64 {
            return hi.clone();
        }
        BF { m: (&hi.m << gap as usize) + &lo.m, e: lo.e }.normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        BF { m: &self.m * &rhs.m, e: self.e + rhs.e }.normalized()
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "bigfloat division by zero");
        if self.is_zero() {
            return BF::zero();
        }
        let shift = PREC as i64 + 32;
        BF {
            m: (&self.m << shift as usize) / &rhs.m,
            e: self.e - rhs.e - shift,
        }
        .normalized()
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        BF { m: &self.m * BigInt::from(n), e: self.e }.normalized()
    }

    pub fn shl(&self, k: i64) -> Self {
        BF { m: self.m.clone(), e: self.e + k }
    }

    /// Nonnegative square root.
    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "sqrt of negative bigfloat");
        if self.is_zero() {
            return BF::zero();
        }
        // scale so the exponent is even and the mantissa carries 2·PREC bits
        let mut m = self.m.clone();
        let mut e = self.e;
        let target_bits = 2 * PREC as i64;
        let shift = (target_bits - m.bits() as i64).max(0);
        let shift = shift + ((e - shift) & 1); // keep e-shift even
        m <<= shift as usize;
        e -= shift;
        BF { m: m.sqrt(), e: e / 2 }.normalized()
    }

    pub fn cmp(&self, rhs: &Self) -> Ordering {
        let d = self.sub(rhs);
        if d.m.is_zero() {
            Ordering::Equal
        } else if d.m.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// floor(log2 |x|), or None for zero.
    pub fn log2_magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.m.bits() as i64 - 1 + self.e)
        }
    }

    /// 2^k as a float.
    pub fn pow2(k: i64) -> Self {
        BF { m: BigInt::one(), e: k }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.m.bits() as i64;
        if bits == 0 {
            return 0.0;
        }
        let keep = 53.min(bits);
        let shifted: BigInt = &self.m >> (bits - keep) as usize;
        let lead: f64 = shifted.to_string().parse().unwrap_or(0.0);
        lead * 2f64.powi((self.e + bits - keep) as i32)
    }
}

/// π to the working precision (Machin's formula).
pub fn pi() -> BF {
    fn atan_inv(x: i64) -> BF {
        // atan(1/x) = Σ (-1)^k / ((2k+1) x^(2k+1)) in fixed point
        let scale = PREC + 64;
        let one = BigInt::one() << scale as usize;
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = &one / &x;
        let mut acc = BigInt::zero();
        let mut k: i64 = 0;
        while !term.is_zero() {
            let contrib = &term / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                acc += &contrib;
            } else {
                acc -= &contrib;
            }
            term /= &x2;
            k += 1;
        }
        BF { m: acc, e: -(scale as i64) }.normalized()
    }
    atan_inv(5).mul_i64(16).sub(&atan_inv(239).mul_i64(4))
}

/// cos(2πk/n) and sin(2πk/n) by Taylor series after range reduction.
pub fn cos_sin_2pi(k: i64, n: i64) -> (BF, BF) {
    assert!(n > 0);
    let k = k.rem_euclid(n);
    let two_pi = pi().shl(1);
    // θ in [-π, π]
    let mut theta = two_pi.mul_i64(k).div(&BF::from_i64(n));
    if theta.cmp(&pi()) == Ordering::Greater {
        theta = theta.sub(&two_pi);
    }
    let t2 = theta.mul(&theta).neg();
    // cos: Σ θ^{2j}/(2j)!, sin: θ·Σ θ^{2j}/(2j+1)!
    let mut cos = BF::from_i64(1);
    let mut sin_base = BF::from_i64(1);
    let mut term_c = BF::from_i64(1);
    let mut term_s = BF::from_i64(1);
    let mut j: i64 = 1;
    loop {
        term_c = term_c.mul(&t2).div(&BF::from_i64((2 * j - 1) * (2 * j)));
        term_s = term_s.mul(&t2).div(&BF::from_i64((2 * j) * (2 * j + 1)));
        cos = cos.add(&term_c);
        sin_base = sin_base.add(&term_s);
        match term_c.log2_magnitude() {
            Some(m) if m > -(PREC as i64 + 16) => {}
            _ => break,
        }
        j += 1;
        if j > 500 {
            break;
        }
    }
    (cos, theta.mul(&sin_base))
}

/// Complex number over [`BF`].
#[derive(Clone, Debug)]
pub struct CF {
    pub re: BF,
    pub im: BF,
}

impl CF {
    pub fn zero() -> Self {
        CF { re: BF::zero(), im: BF::zero() }
    }

    pub fn real(re: BF) -> Self {
        CF { re, im: BF::zero() }
    }

    pub fn new(re: BF, im: BF) -> Self {
        CF { re, im }
    }

    pub fn from_rat(r: &Rat) -> Self {
        CF::real(BF::from_rat(r))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        CF { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        CF { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn neg(&self) -> Self {
        CF { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        CF {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sq();
        let num = self.mul(&rhs.conj());
        CF { re: num.re.div(&d), im: num.im.div(&d) }
    }

    pub fn conj(&self) -> Self {
        CF { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sq(&self) -> BF {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BF {
        self.norm_sq().sqrt()
    }

    /// e^{2πik/n} at working precision.
    pub fn root_of_unity(k: i64, n: i64) -> Self {
        let (c, s) = cos_sin_2pi(k, n);
        CF { re: c, im: s }
    }
}

/// Horner evaluation of a rational polynomial at a complex point.
pub fn eval_cf(p: &UPoly<Rat>, z: &CF) -> CF {
    let mut acc = CF::zero();
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(z).add(&CF::from_rat(c));
    }
    acc
}

/// All complex roots of a squarefree rational polynomial, by the
/// Aberth–Ehrlich iteration at working precision.
pub fn complex_roots(p: &UPoly<Rat>) -> Vec<CF> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return vec![],
    };
    let dp = p.derivative();
    // Cauchy bound: 1 + max |a_i / a_n|
    let lead = BF::from_rat(&p.leading()).abs();
    let mut radius = BF::from_i64(1);
    for c in &p.coeffs {
        let b = BF::from_rat(c).abs().div(&lead);
        if b.cmp(&radius) == Ordering::Greater {
            radius = b;
        }
    }
    radius = radius.add(&BF::from_i64(1));
    let mut zs: Vec<CF> = (0..n)
        .map(|k| {
            // spread initial guesses on a circle, avoiding real-axis symmetry
            let w = CF::root_of_unity(4 * k as i64 + 1, 4 * n as i64);
            CF { re: w.re.mul(&radius), im: w.im.mul(&radius) }
        })
        .collect();
    let tol = -(PREC as i64 - 24);
    for _ in 0..400 {
        let mut max_step = BF::zero();
        for k in 0..n {
            let pz = eval_cf(p, &zs[k]);
            let dpz = eval_cf(&dp, &zs[k]);
            if pz.is_zero() {
                continue;
            }
            let w = if dpz.is_zero() {
                CF::real(BF::pow2(-8)) // nudge off a critical point
            } else {
                pz.div(&dpz)
            };
            let mut s = CF::zero();
            for j in 0..n {
                if j != k {
                    let d = zs[k].sub(&zs[j]);
                    if !d.is_zero() {
                        s = s.add(&CF::real(BF::from_i64(1)).div(&d));
                    }
                }
            }
            let denom = CF::real(BF::from_i64(1)).sub(&w.mul(&s));
            let step = if denom.is_zero() { w.clone() } else { w.div(&denom) };
            zs[k] = zs[k].sub(&step);
            let sa = step.abs();
            if sa.cmp(&max_step) == Ordering::Greater {
                max_step = sa;
            }
        }
        let scale = zs
            .iter()
            .map(|z| z.abs())
            .fold(BF::from_i64(1), |a, b| if b.cmp(&a) == Ordering::Greater { b } else { a });
        match max_step.div(&scale).log2_magnitude() {
            Some(m) if m < tol => break,
            None => break,
            _ => {}
        }
    }
    zs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn close(a: &BF, b: &BF, bits: i64) -> bool {
        match a.sub(b).log2_magnitude() {
            None => true,
            Some(m) => m < -bits,
        }
    }

    #[test]
    fn pi_value() {
        // π = 3.14159265358979323846...
        let p = pi();
        let approx = BF::from_rat(&Rat::new(
            "314159265358979323846264338327950288419716939937510582097494459"
                .parse()
                .unwrap(),
            num::pow::pow(BigInt::from(10u32), 62),
        ));
        assert!(close(&p, &approx, 200));
    }

    #[test]
    fn trig_exact_points() {
        let (c, s) = cos_sin_2pi(1, 4); // i
        assert!(close(&c, &BF::zero(), 240));
        assert!(close(&s, &BF::from_i64(1), 240));
        let (c, s) = cos_sin_2pi(1, 2); // -1
        assert!(close(&c, &BF::from_i64(-1), 240));
        assert!(close(&s, &BF::zero(), 240));
        let (c6, _) = cos_sin_2pi(1, 6); // cos 60° = 1/2
        assert!(close(&c6, &BF::from_rat(&ratio(1, 2)), 240));
    }

    #[test]
    fn sqrt_two() {
        let two = BF::from_i64(2);
        let r = two.sqrt();
        assert!(close(&r.mul(&r), &two, 240));
    }

    #[test]
    fn roots_of_quadratic() {
        // t^2 - t + 1: roots are primitive 6th roots of unity
        let p = UPoly::new(vec![rat(1), rat(-1), rat(1)]);
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 2);
        for z in &roots {
            assert!(close(&z.re, &BF::from_rat(&ratio(1, 2)), 200));
            assert!(close(
                &z.im.abs(),
                &BF::from_i64(3).sqrt().div(&BF::from_i64(2)),
                200
            ));
        }
    }

    #[test]
    fn roots_of_wilkinson_ish() {
        // (t-1)(t-2)(t-3)(t-4)
        let mut p = UPoly::one();
        for k in 1..=4 {
            p = p.mul(&UPoly::new(vec![rat(-k), rat(1)]));
        }
        let mut roots = complex_roots(&p);
        roots.sort_by(|a, b| a.re.cmp(&b.re));
        for (i, z) in roots.iter().enumerate() {
            assert!(close(&z.re, &BF::from_i64(i as i64 + 1), 180));
            assert!(close(&z.im, &BF::zero(), 180));
        }
    }
}
