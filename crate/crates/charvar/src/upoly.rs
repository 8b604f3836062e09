//! Dense univariate polynomials over an exact field.
//!
//! Used for minimal polynomials, cyclotomic polynomials, Euclidean
//! remainder sequences, and the characteristic equations of the
//! Newton–Puiseux iteration. Multivariate work lives in [`crate::poly`].

use crate::scalar::{rat, Rat, Scalar};
use num::{BigInt, Integer, One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of t^i.
/// Invariant: no trailing zero coefficients (zero polynomial = empty vec).
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<K: Scalar> {
    pub coeffs: Vec<K>,
}

impl<K: Scalar> UPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UPoly::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        UPoly::new(vec![c])
    }

    /// The monomial c·t^n.
    pub fn monomial(c: K, n: usize) -> Self {
        let mut v = vec![K::zero(); n + 1];
        v[n] = c;
        UPoly::new(v)
    }

    pub fn var() -> Self {
        UPoly::monomial(K::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn leading(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + rhs.coeff(i));
        }
        UPoly::new(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - rhs.coeff(i));
        }
        UPoly::new(v)
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(v)
    }

    pub fn scale(&self, c: &K) -> Self {
        UPoly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = UPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; panics if rhs is zero.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![K::zero(); self.coeffs.len().saturating_sub(rhs.coeffs.len() - 1)];
        let lead_inv = rhs.leading().inv().expect("leading coefficient not invertible");
        while let Some(rd) = rem.degree() {
            let dd = rhs.degree().unwrap();
            if rd < dd {
                break;
            }
            let c = rem.leading() * lead_inv.clone();
            let shift = rd - dd;
            quo[shift] = c.clone();
            let sub = rhs.scale(&c);
            let mut v = vec![K::zero(); shift];
            v.extend(sub.coeffs);
            rem = rem.sub(&UPoly::new(v));
        }
        (UPoly::new(quo), rem)
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.div_rem(rhs).1
    }

    /// Exact quotient; panics if the division has a remainder.
    pub fn div_exact(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(li) => self.scale(&li),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * K::from_i64(i as i64))
            .collect();
        UPoly::new(v)
    }

    /// Squarefree part f / gcd(f, f').
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.deg() == 0 {
            self.monic()
        } else {
            self.div_exact(&g).monic()
        }
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Substitutes t -> p(t).
    pub fn compose(&self, p: &Self) -> Self {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(p).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Reverses roots: t^deg · f(1/t).
    pub fn reverse(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        UPoly::new(v)
    }
}

impl UPoly<Rat> {
    /// Clears denominators and divides by integer content; the result has
    /// coprime integer coefficients with positive leading coefficient.
    pub fn primitive_integer(&self) -> (Self, Rat) {
        if self.is_zero() {
            return (UPoly::zero(), rat(1));
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &scaled {
            content = content.gcd(c);
        }
        if scaled.last().unwrap().is_negative() {
            content = -content;
        }
        let unit = Rat::new(content.clone(), den);
        let prim = UPoly::new(
            scaled
                .into_iter()
                .map(|c| Rat::from_integer(c / &content))
                .collect(),
        );
        (prim, unit)
    }

    /// All rational roots with multiplicity, by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        if self.is_zero() {
            return vec![];
        }
        let (prim, _) = self.primitive_integer();
        // candidate p/q: p | constant term, q | leading term
        let mut f = prim;
        let mut roots: Vec<(Rat, usize)> = Vec::new();
        // strip t^k
        let mut zero_mult = 0usize;
        while !f.is_zero() && Scalar::is_zero(&f.coeff(0)) {
            f = UPoly::new(f.coeffs[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((rat(0), zero_mult));
        }
        if f.deg() == 0 {
            return roots;
        }
        let (fi, _) = f.primitive_integer();
        let a0 = fi.coeff(0).numer().abs();
        let an = fi.leading().numer().abs();
        let ps = divisors(&a0);
        let qs = divisors(&an);
        for p in &ps {
            for q in &qs {
                if p.gcd(q) != BigInt::one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = Rat::new(p * BigInt::from(sign), q.clone());
                    let mut mult = 0usize;
                    while Scalar::is_zero(&f.eval(&cand)) {
                        let lin = UPoly::new(vec![-cand.clone(), rat(1)]);
                        f = f.div_exact(&lin);
                        mult += 1;
                        if f.is_zero() {
                            break;
                        }
                    }
                    if mult > 0 {
                        roots.push((cand, mult));
                    }
                }
            }
        }
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // trial division; fine for the coefficient sizes seen here
    let mut divs = vec![BigInt::one()];
    if n.is_zero() {
        return divs;
    }
    let mut m = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
        if primes.iter().map(|(_, e)| e).sum::<u32>() > 64 {
            break;
        }
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

/// The n-th cyclotomic polynomial, by Φ_n = (t^n − 1) / Π_{d|n, d<n} Φ_d.
/// Cached process-wide; entries are immutable once computed.
pub fn cyclotomic_polynomial(n: u32) -> UPoly<Rat> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u32, UPoly<Rat>>>> = OnceLock::new();
    assert!(n >= 1);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = UPoly::monomial(rat(1), n as usize);
    num = num.sub(&UPoly::one());
    for d in 1..n {
        if n % d == 0 {
            num = num.div_exact(&cyclotomic_polynomial(d));
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

impl<K: Scalar> fmt::Display for UPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*t", c)?,
                _ => write!(f, "({})*t^{}", c, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(cs: &[i64]) -> UPoly<Rat> {
        UPoly::new(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (t-1)(t-2) = t^2 - 3t + 2
        let f = p(&[2, -3, 1]);
        let g = p(&[-1, 1]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, p(&[-2, 1]));
        assert_eq!(f.gcd(&p(&[-1, 0, 1])), p(&[-1, 1])); // gcd with (t-1)(t+1)
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_polynomial(1), p(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), p(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (t-1)^2 (2t+3)
        let f = p(&[1, -2, 1]).mul(&p(&[3, 2]));
        let mut roots = f.rational_roots();
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            roots,
            vec![(crate::scalar::ratio(-3, 2), 1), (rat(1), 2)]
        );
    }

    #[test]
    fn squarefree() {
        let f = p(&[1, -2, 1]); // (t-1)^2
        assert_eq!(f.squarefree_part(), p(&[-1, 1]));
    }
}
