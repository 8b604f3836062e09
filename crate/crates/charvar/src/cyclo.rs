//! Exact cyclotomic numbers.
//!
//! A [`CycNum`] is an element of Q(ζ_n) stored as rational coordinates in the
//! power basis 1, ζ, …, ζ^{φ(n)−1}, reduced mod the n-th cyclotomic
//! polynomial. The conductor is canonical: minimal, and never ≡ 2 mod 4
//! (those fields coincide with the odd half). All cyclotomic constants of a
//! computation live in one compositum, so arithmetic just lifts to the lcm
//! of the two conductors and reduces back.

use crate::bigfloat::{cos_sin_2pi, CF};
use crate::scalar::{rat, Rat, Scalar};
use crate::upoly::{cyclotomic_polynomial, euler_phi, UPoly};
use num::{BigInt, Signed};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Debug)]
pub struct CycNum {
    /// Conductor: 1 for rationals; canonical (minimal, not 2 mod 4).
    n: u32,
    /// Coordinates in the basis ζ_n^0 .. ζ_n^{φ(n)−1}.
    c: Vec<Rat>,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { n: 1, c: vec![rat(0)] }
    }

    pub fn from_rat(r: Rat) -> Self {
        CycNum { n: 1, c: vec![r] }
    }

    pub fn from_i64(k: i64) -> Self {
        CycNum::from_rat(rat(k))
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u32;
        let mut coeffs = vec![rat(0); (k + 1) as usize];
        coeffs[k as usize] = rat(1);
        CycNum::from_zeta_poly(n, UPoly::new(coeffs))
    }

    /// Builds an element of Q(ζ_n) from a polynomial in ζ_n, reducing mod Φ_n
    /// and minimizing the conductor.
    pub fn from_zeta_poly(n: u32, p: UPoly<Rat>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let r = p.rem(&phi);
        let mut c = r.coeffs;
        c.resize(euler_phi(n) as usize, rat(0));
        (CycNum { n, c }).reduced()
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> Option<Rat> {
        if self.n == 1 {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// The element as a polynomial in ζ_n.
    fn zeta_poly(&self) -> UPoly<Rat> {
        UPoly::new(self.c.clone())
    }

    /// Lifts to the (larger) conductor m, with n | m.
    fn lift(&self, m: u32) -> CycNum {
        if m == self.n {
            return self.clone();
        }
        assert!(m % self.n == 0, "lift target must be a multiple of the conductor");
        let step = (m / self.n) as usize;
        let mut coeffs = vec![rat(0); self.c.len() * step + 1];
        for (i, a) in self.c.iter().enumerate() {
            coeffs[i * step] = a.clone();
        }
        let phi = cyclotomic_polynomial(m);
        let r = UPoly::new(coeffs).rem(&phi);
        let mut c = r.coeffs;
        c.resize(euler_phi(m) as usize, rat(0));
        CycNum { n: m, c }
    }

    /// Normalizes the conductor to the minimal cyclotomic field containing
    /// the element.
    fn reduced(self) -> CycNum {
        if self.n == 1 {
            return self;
        }
        if self.is_zero() {
            return CycNum::zero();
        }
        // try proper divisors in increasing order; restart after a descent
        let mut cur = self;
        'outer: loop {
            let mut divs: Vec<u32> = (1..cur.n).filter(|d| cur.n % d == 0).collect();
            divs.sort();
            for d in divs {
                if d % 4 == 2 {
                    continue; // conductor 2 mod 4 is never canonical
                }
                if let Some(smaller) = cur.try_descend(d) {
                    cur = smaller;
                    if cur.n == 1 {
                        return cur;
                    }
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Attempts to rewrite the element in Q(ζ_d) for d | n.
    fn try_descend(&self, d: u32) -> Option<CycNum> {
        let phi_n = euler_phi(self.n) as usize;
        let phi_d = euler_phi(d) as usize;
        // columns: coordinates of ζ_n^{(n/d) j} for j = 0..φ(d)-1
        let step = (self.n / d) as i64;
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(phi_d);
        for j in 0..phi_d {
            let b = basis_coords(self.n, step * j as i64);
            cols.push(b);
        }
        let x = solve_rational(&cols, phi_n, &self.c)?;
        Some(CycNum { n: d, c: x })
    }

    pub fn add_ref(&self, rhs: &CycNum) -> CycNum {
        let m = lcm_u32(self.n, rhs.n);
        let a = self.lift(m);
        let b = rhs.lift(m);
        let c: Vec<Rat> = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        (CycNum { n: m, c }).reduced()
    }

    pub fn sub_ref(&self, rhs: &CycNum) -> CycNum {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> CycNum {
        CycNum { n: self.n, c: self.c.iter().map(|x| -x.clone()).collect() }
    }

    pub fn mul_ref(&self, rhs: &CycNum) -> CycNum {
        if self.n == 1 && rhs.n == 1 {
            return CycNum { n: 1, c: vec![&self.c[0] * &rhs.c[0]] };
        }
        let m = lcm_u32(self.n, rhs.n);
        let a = self.lift(m);
        let b = rhs.lift(m);
        let prod = a.zeta_poly().mul(&b.zeta_poly());
        CycNum::from_zeta_poly(m, prod)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm mod Φ_n.
    pub fn inv_ref(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        if self.n == 1 {
            return Some(CycNum { n: 1, c: vec![self.c[0].recip()] });
        }
        let phi = cyclotomic_polynomial(self.n);
        let (g, s) = ext_gcd(&self.zeta_poly(), &phi);
        // g is a nonzero constant since Φ_n is irreducible
        let g0 = g.coeff(0);
        debug_assert!(g.deg() == 0 && !Scalar::is_zero(&g0));
        Some(CycNum::from_zeta_poly(self.n, s.scale(&g0.recip())))
    }

    pub fn pow(&self, e: i64) -> CycNum {
        let base = if e < 0 {
            self.inv_ref().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut b = base;
        let mut acc = CycNum::from_i64(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul_ref(&b);
            }
        }
        acc
    }

    /// Galois action ζ ↦ ζ^k for gcd(k, n) = 1.
    pub fn galois(&self, k: u32) -> CycNum {
        assert!(gcd_u32(k % self.n.max(1), self.n) == 1 || self.n == 1);
        if self.n == 1 {
            return self.clone();
        }
        let mut coeffs = vec![rat(0); (self.n as usize) * 2];
        for (i, a) in self.c.iter().enumerate() {
            let e = (i as u64 * k as u64 % self.n as u64) as usize;
            coeffs[e] = &coeffs[e] + a;
        }
        CycNum::from_zeta_poly(self.n, UPoly::new(coeffs))
    }

    /// Complex conjugate (ζ ↦ ζ^{-1}).
    pub fn conj(&self) -> CycNum {
        if self.n == 1 {
            self.clone()
        } else {
            self.galois(self.n - 1)
        }
    }

    /// All distinct Galois conjugates.
    pub fn conjugates(&self) -> Vec<CycNum> {
        if self.n == 1 {
            return vec![self.clone()];
        }
        let mut out: Vec<CycNum> = Vec::new();
        for k in 1..self.n {
            if gcd_u32(k, self.n) != 1 {
                continue;
            }
            let g = self.galois(k);
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    /// Minimal polynomial over Q (monic, irreducible): the product of
    /// t − β over the Galois orbit.
    pub fn minimal_polynomial(&self) -> UPoly<Rat> {
        let mut prod: UPoly<CycNum> = UPoly::one();
        for b in self.conjugates() {
            let lin = UPoly::new(vec![b.neg_ref(), CycNum::from_i64(1)]);
            prod = prod.mul(&lin);
        }
        let coeffs: Vec<Rat> = prod
            .coeffs
            .iter()
            .map(|c| c.is_rational().expect("orbit product must be rational"))
            .collect();
        UPoly::new(coeffs)
    }

    /// Exact multiplicative order when the element is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        // the roots of unity in Q(ζ_n) form μ_N with N = n or 2n
        let big_n = if self.n % 2 == 0 { self.n } else { 2 * self.n };
        if self.pow(big_n as i64) != CycNum::from_i64(1) {
            return None;
        }
        let mut divs: Vec<u32> = (1..=big_n).filter(|d| big_n % d == 0).collect();
        divs.sort();
        divs.into_iter()
            .find(|&d| self.pow(d as i64) == CycNum::from_i64(1))
    }

    /// Numerical embedding with ζ_n = exp(2πi/n).
    pub fn embed(&self) -> CF {
        let mut acc = CF::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (cos, sin) = cos_sin_2pi(i as i64, self.n as i64);
            let w = CF::new(cos, sin);
            acc = acc.add(&w.mul(&CF::from_rat(a)));
        }
        acc
    }
}

/// Coordinates of ζ_n^e in the power basis of Q(ζ_n).
fn basis_coords(n: u32, e: i64) -> Vec<Rat> {
    let e = e.rem_euclid(n as i64) as usize;
    let mut coeffs = vec![rat(0); e + 1];
    coeffs[e] = rat(1);
    let r = UPoly::new(coeffs).rem(&cyclotomic_polynomial(n));
    let mut c = r.coeffs;
    c.resize(euler_phi(n) as usize, rat(0));
    c
}

/// Solves Σ x_j·cols[j] = rhs over Q; `rows` is the common length.
fn solve_rational(cols: &[Vec<Rat>], rows: usize, rhs: &[Rat]) -> Option<Vec<Rat>> {
    let m = cols.len();
    // augmented row-major matrix
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let piv = (r..rows).find(|&i| !a[i][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        a.swap(r, piv);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=m {
                    let sub = &a[r][j] * &f;
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency
    for i in r..rows {
        if !a[i][m].is_zero() {
            return None;
        }
    }
    let mut x = vec![rat(0); m];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = a[row][m].clone();
    }
    Some(x)
}

/// Extended gcd: returns (g, s) with s·a ≡ g mod b.
fn ext_gcd(a: &UPoly<Rat>, b: &UPoly<Rat>) -> (UPoly<Rat>, UPoly<Rat>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

/// ζ_q^k + ζ_q^{-k}, i.e. 2cos(2πk/q), as an exact cyclotomic number.
pub fn zeta_plus_inv(q: u32, k: i64) -> CycNum {
    let z = CycNum::root_of_unity(q, k);
    z.add_ref(&z.inv_ref().unwrap())
}

/// Exact square root of a rational as a cyclotomic number (Gauss sums).
pub fn sqrt_rational(r: &Rat) -> Option<CycNum> {
    if r.is_zero() {
        return Some(CycNum::zero());
    }
    // factor numerator and denominator; √(n/d) = √(n·d)/d
    let nd = r.numer().abs() * r.denom();
    let mut m = nd.clone();
    let mut square = BigInt::from(1);
    let mut odd_primes: Vec<u64> = Vec::new();
    let mut two = false;
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while num::Zero::is_zero(&(&m % &p)) {
            m = &m / &p;
            e += 1;
        }
        if e > 0 {
            square *= num::pow::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                if p == BigInt::from(2) {
                    two = true;
                } else {
                    odd_primes.push(to_u64(&p)?);
                }
            }
        }
        p += 1;
        if p > BigInt::from(1_000_000) {
            return None; // keep factoring desk-scale
        }
    }
    if m == BigInt::from(2) {
        two = true;
    } else if m > BigInt::from(1) {
        odd_primes.push(to_u64(&m)?);
    }
    let mut acc = CycNum::from_rat(Rat::new(square, r.denom().clone()));
    if two {
        // √2 = ζ8 + ζ8^{-1}
        acc = acc.mul_ref(&zeta_plus_inv(8, 1));
    }
    for p in odd_primes {
        acc = acc.mul_ref(&gauss_sum_sqrt(p as u32));
    }
    if r.is_negative() {
        acc = acc.mul_ref(&CycNum::root_of_unity(4, 1));
    }
    Some(acc)
}

fn to_u64(b: &BigInt) -> Option<u64> {
    use num::ToPrimitive;
    b.to_u64()
}

/// √p for an odd prime p, via the quadratic Gauss sum.
fn gauss_sum_sqrt(p: u32) -> CycNum {
    let mut coeffs = vec![rat(0); p as usize];
    for a in 1..p {
        let ls = legendre(a, p);
        coeffs[a as usize] = rat(ls as i64);
    }
    let g = CycNum::from_zeta_poly(p, UPoly::new(coeffs));
    if p % 4 == 1 {
        g
    } else {
        // g² = −p, so (g·ζ4^{-1})² = p
        g.mul_ref(&CycNum::root_of_unity(4, -1))
    }
}

fn legendre(a: u32, p: u32) -> i32 {
    // Euler's criterion by fast modular exponentiation
    let mut base = (a % p) as u64;
    let mut e = (p - 1) / 2;
    let mut acc: u64 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else if acc == (p - 1) as u64 {
        -1
    } else {
        0
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(self, rhs: CycNum) -> CycNum {
        self.add_ref(&rhs)
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, rhs: CycNum) -> CycNum {
        self.sub_ref(&rhs)
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, rhs: CycNum) -> CycNum {
        self.mul_ref(&rhs)
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.is_rational() {
            return write!(f, "{}", crate::scalar::rat_to_string(&r));
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = crate::scalar::rat_to_string(a);
            match i {
                0 => write!(f, "{}", cs)?,
                1 => write!(f, "({})*z{}", cs, self.n)?,
                _ => write!(f, "({})*z{}^{}", cs, self.n, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Scalar for CycNum {
    fn zero() -> Self {
        CycNum::zero()
    }
    fn one() -> Self {
        CycNum::from_i64(1)
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        CycNum::from_i64(n)
    }
    fn inv(&self) -> Option<Self> {
        self.inv_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BF;
    use crate::scalar::ratio;

    #[test]
    fn conductor_reduction() {
        // ζ3 + ζ3^{-1} = −1
        assert_eq!(zeta_plus_inv(3, 1), CycNum::from_i64(-1));
        // ζ4 + ζ4^{-1} = 0
        assert!(zeta_plus_inv(4, 1).is_zero());
        // ζ6 + ζ6^{-1} = 1
        assert_eq!(zeta_plus_inv(6, 1), CycNum::from_i64(1));
        // ζ8 + ζ8^{-1} = √2 has conductor 8
        assert_eq!(zeta_plus_inv(8, 1).conductor(), 8);
        // ζ6 itself lives at canonical conductor 3 (6 ≡ 2 mod 4)
        assert_eq!(CycNum::root_of_unity(6, 1).conductor(), 3);
    }

    #[test]
    fn field_axioms_sampled() {
        let a = CycNum::root_of_unity(5, 1).add_ref(&CycNum::from_rat(ratio(1, 2)));
        let b = CycNum::root_of_unity(8, 3).sub_ref(&CycNum::from_i64(2));
        let c = CycNum::root_of_unity(3, 1);
        let left = a.mul_ref(&b.add_ref(&c));
        let right = a.mul_ref(&b).add_ref(&a.mul_ref(&c));
        assert_eq!(left, right);
        let ai = a.inv_ref().unwrap();
        assert_eq!(a.mul_ref(&ai), CycNum::from_i64(1));
    }

    #[test]
    fn gauss_sum_squares() {
        for r in [2i64, 3, 5, 7, 12, -3, -1] {
            let s = sqrt_rational(&rat(r)).unwrap();
            assert_eq!(s.mul_ref(&s), CycNum::from_i64(r), "sqrt({})^2", r);
        }
        let s = sqrt_rational(&ratio(9, 4)).unwrap();
        assert_eq!(s, CycNum::from_rat(ratio(3, 2)));
    }

    #[test]
    fn minimal_polynomials() {
        // ζ6: Φ6 = t² − t + 1
        let z6 = CycNum::root_of_unity(6, 1);
        let mp = z6.minimal_polynomial();
        assert_eq!(mp, UPoly::new(vec![rat(1), rat(-1), rat(1)]));
        // √2: t² − 2
        let s2 = sqrt_rational(&rat(2)).unwrap();
        assert_eq!(s2.minimal_polynomial(), UPoly::new(vec![rat(-2), rat(0), rat(1)]));
    }

    #[test]
    fn root_of_unity_orders() {
        assert_eq!(CycNum::from_i64(-1).root_of_unity_order(), Some(2));
        assert_eq!(CycNum::from_i64(1).root_of_unity_order(), Some(1));
        assert_eq!(CycNum::root_of_unity(6, 1).root_of_unity_order(), Some(6));
        assert_eq!(CycNum::from_i64(2).root_of_unity_order(), None);
        assert_eq!(zeta_plus_inv(8, 1).root_of_unity_order(), None);
    }

    #[test]
    fn embedding_matches_arithmetic() {
        // |embed(a·b) − embed(a)·embed(b)| below 60 decimal digits
        let a = CycNum::root_of_unity(7, 2).add_ref(&CycNum::from_rat(ratio(3, 5)));
        let b = CycNum::root_of_unity(12, 5).sub_ref(&CycNum::from_i64(1));
        let lhs = a.mul_ref(&b).embed();
        let rhs = a.embed().mul(&b.embed());
        let err = lhs.sub(&rhs).abs();
        let bound = BF::from_rat(&Rat::new(1.into(), num::pow::pow(BigInt::from(10u32), 60)));
        assert!(err.cmp(&bound) == std::cmp::Ordering::Less);
    }
}
