//! Sparse multivariate Laurent polynomials over an exact field.
//!
//! Terms are stored as a map from exponent vectors to nonzero coefficients;
//! the variable list is sorted by name and exponents may be negative (Laurent
//! monomials are units). The canonical textual form — variables sorted, terms
//! in descending graded-lex order, rational coefficients as `p/q` — is stable
//! across round-trips and doubles as the on-disk cache key.

use crate::scalar::{rat, Rat, Scalar};
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial in named variables. Invariants: no zero coefficients are
/// stored, every exponent vector has length `vars.len()`, and `vars` is
/// sorted and deduplicated.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<K: Scalar> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i32>, K>,
}

impl<K: Scalar> Poly<K> {
    pub fn zero() -> Self {
        Poly { vars: vec![], terms: BTreeMap::new() }
    }

    pub fn constant(c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![], c);
        }
        Poly { vars: vec![], terms }
    }

    pub fn one() -> Self {
        Poly::constant(K::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(K::from_i64(n))
    }

    pub fn var(name: &str) -> Self {
        Poly::monomial(K::one(), &[(name, 1)])
    }

    /// c · v1^e1 · v2^e2 · …
    pub fn monomial(c: K, powers: &[(&str, i32)]) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut pows: Vec<(String, i32)> = powers
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|(v, e)| (v.to_string(), *e))
            .collect();
        pows.sort();
        let vars: Vec<String> = pows.iter().map(|(v, _)| v.clone()).collect();
        let exps: Vec<i32> = pows.iter().map(|(_, e)| *e).collect();
        let mut terms = BTreeMap::new();
        terms.insert(exps, c);
        Poly { vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant term.
    pub fn constant_term(&self) -> K {
        let key = vec![0; self.vars.len()];
        self.terms.get(&key).cloned().unwrap_or_else(K::zero)
    }

    /// For constant polynomials, the value.
    pub fn as_constant(&self) -> Option<K> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates (exponent vector, coefficient) pairs; exponents index `vars`.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &K)> {
        self.terms.iter()
    }

    /// Drops variables that no longer occur and normalizes empty exponent rows.
    fn prune(mut self) -> Self {
        if self.terms.is_empty() {
            return Poly::zero();
        }
        let n = self.vars.len();
        let mut used = vec![false; n];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in std::mem::take(&mut self.terms) {
            let ne: Vec<i32> = keep.iter().map(|&i| e[i]).collect();
            terms.insert(ne, c);
        }
        Poly { vars, terms }
    }

    /// Rewrites both polynomials over the union of their variable lists.
    fn aligned(&self, rhs: &Self) -> (Vec<String>, BTreeMap<Vec<i32>, K>, BTreeMap<Vec<i32>, K>) {
        let mut vars: Vec<String> = self.vars.iter().chain(rhs.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        let remap = |p: &Self| -> BTreeMap<Vec<i32>, K> {
            let idx: Vec<usize> = p
                .vars
                .iter()
                .map(|v| vars.binary_search(v).unwrap())
                .collect();
            p.terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = vec![0; vars.len()];
                    for (i, &x) in e.iter().enumerate() {
                        ne[idx[i]] = x;
                    }
                    (ne, c.clone())
                })
                .collect()
        };
        (vars.clone(), remap(self), remap(rhs))
    }

    /// Rewrites this polynomial over a superset of its variables.
    pub fn embed(&self, vars: &[String]) -> Self {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("missing variable"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    ne[idx[i]] = x;
                }
                (ne, c.clone())
            })
            .collect();
        Poly { vars: vars.to_vec(), terms }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (vars, a, mut b) = self.aligned(rhs);
        let mut terms = a;
        for (e, c) in std::mem::take(&mut b) {
            let entry = terms.entry(e).or_insert_with(K::zero);
            *entry = entry.clone() + c;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { vars, terms }.prune()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (vars, a, b) = self.aligned(rhs);
        let mut terms: BTreeMap<Vec<i32>, K> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca.clone() * cb.clone();
                let entry = terms.entry(e).or_insert_with(K::zero);
                *entry = entry.clone() + c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { vars, terms }.prune()
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
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

    /// Degree in one variable (0 if absent); `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        let i = match self.vars.iter().position(|v| v == var) {
            Some(i) => i,
            None => return Some(0),
        };
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Lowest exponent of `var` across all terms.
    pub fn low_degree_in(&self, var: &str) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        let i = match self.vars.iter().position(|v| v == var) {
            Some(i) => i,
            None => return Some(0),
        };
        self.terms.keys().map(|e| e[i]).min()
    }

    pub fn total_degree(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            self.terms.keys().map(|e| e.iter().sum::<i32>()).max()
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => self.terms.keys().any(|e| e[i] != 0),
            None => false,
        }
    }

    /// Multiplies by `var^k` (k may be negative).
    pub fn mul_var_pow(&self, var: &str, k: i32) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        self.mul(&Poly::monomial(K::one(), &[(var, k)]))
    }

    /// Divides out the largest monomial factor, making every variable's
    /// lowest exponent zero. Returns the normalized polynomial.
    pub fn strip_monomial_factor(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let n = self.vars.len();
        let mut mins = vec![i32::MAX; n];
        for e in self.terms.keys() {
            for i in 0..n {
                mins[i] = mins[i].min(e[i]);
            }
        }
        if mins.iter().all(|&m| m == 0) {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let ne: Vec<i32> = e.iter().zip(&mins).map(|(x, m)| x - m).collect();
                (ne, c.clone())
            })
            .collect();
        Poly { vars: self.vars.clone(), terms }.prune()
    }

    /// True if any variable occurs with a negative exponent.
    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Leading term in descending graded-lex order (requires nonzero).
    fn leading_term(&self) -> (Vec<i32>, K) {
        let (e, c) = self
            .terms
            .iter()
            .max_by(|(a, _), (b, _)| grlex_cmp(a, b))
            .expect("leading term of zero polynomial");
        (e.clone(), c.clone())
    }

    /// Exact multivariate division, up to Laurent units: both sides are
    /// normalized by `strip_monomial_factor` first and the quotient carries
    /// the monomial difference. Returns `None` if the division is inexact.
    pub fn try_div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        // factor out Laurent units so graded-lex division terminates
        let n = self.vars.len();
        let mut self_min = vec![i32::MAX; n];
        for e in self.terms.keys() {
            for i in 0..n {
                self_min[i] = self_min[i].min(e[i]);
            }
        }
        let m = rhs.vars.len();
        let mut rhs_min = vec![i32::MAX; m];
        for e in rhs.terms.keys() {
            for i in 0..m {
                rhs_min[i] = rhs_min[i].min(e[i]);
            }
        }
        let a = self.strip_monomial_factor();
        let b = rhs.strip_monomial_factor();
        let (vars, at, bt) = a.aligned(&b);
        let a = Poly { vars: vars.clone(), terms: at };
        let b = Poly { vars: vars.clone(), terms: bt };
        let (lb_e, lb_c) = b.leading_term();
        let lb_inv = lb_c.inv()?;
        let mut rem = a;
        let mut quo = Poly::zero();
        while !rem.is_zero() {
            // keep the fixed variable frame: prune inside sub may drop vars
            rem = rem.embed(&vars);
            let (le, lc) = rem.leading_term();
            let qe: Vec<i32> = le.iter().zip(&lb_e).map(|(x, y)| x - y).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let qc = lc * lb_inv.clone();
            let mut qterm_terms = BTreeMap::new();
            qterm_terms.insert(qe, qc);
            let qterm = Poly { vars: vars.clone(), terms: qterm_terms };
            quo = quo.add(&qterm);
            rem = rem.sub(&qterm.mul(&b));
        }
        // reattach the unit monomial difference
        let mut q = quo;
        for (i, v) in self.vars.iter().enumerate() {
            if self_min[i] != 0 {
                q = q.mul_var_pow(v, self_min[i]);
            }
        }
        for (i, v) in rhs.vars.iter().enumerate() {
            if rhs_min[i] != 0 {
                q = q.mul_var_pow(v, -rhs_min[i]);
            }
        }
        Some(q)
    }

    pub fn derivative(&self, var: &str) -> Self {
        let i = match self.vars.iter().position(|v| v == var) {
            Some(i) => i,
            None => return Poly::zero(),
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] != 0)
            .map(|(e, c)| {
                let mut ne = e.clone();
                ne[i] -= 1;
                (ne, c.clone() * K::from_i64(e[i] as i64))
            })
            .collect();
        Poly { vars: self.vars.clone(), terms }.prune()
    }

    /// Substitutes `var -> value` where the variable occurs with nonnegative
    /// exponents only.
    pub fn substitute(&self, var: &str, value: &Self) -> Self {
        let i = match self.vars.iter().position(|v| v == var) {
            Some(i) => i,
            None => return self.clone(),
        };
        let mut result = Poly::zero();
        let mut pow_cache: Vec<Poly<K>> = vec![Poly::one()];
        for (e, c) in &self.terms {
            let k = e[i];
            assert!(k >= 0, "substitute requires nonnegative exponents in {}", var);
            while pow_cache.len() <= k as usize {
                let next = pow_cache.last().unwrap().mul(value);
                pow_cache.push(next);
            }
            let mut ne = e.clone();
            ne[i] = 0;
            let mut rest_terms = BTreeMap::new();
            rest_terms.insert(ne, c.clone());
            let rest = Poly { vars: self.vars.clone(), terms: rest_terms }.prune();
            result = result.add(&rest.mul(&pow_cache[k as usize]));
        }
        result
    }

    /// Evaluates at scalar values for every variable (negative exponents use
    /// field inverses). Panics if a variable is missing from the map or a
    /// negative power of zero is requested.
    pub fn eval(&self, values: &BTreeMap<String, K>) -> K {
        let vals: Vec<&K> = self
            .vars
            .iter()
            .map(|v| values.get(v).unwrap_or_else(|| panic!("missing value for {}", v)))
            .collect();
        let mut acc = K::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    vals[i].clone()
                } else {
                    vals[i].inv().expect("negative power of zero in eval")
                };
                for _ in 0..k.abs() {
                    t = t * base.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Views the polynomial as univariate in `var`: returns (degree, coeffs)
    /// where `coeffs[k]` is the coefficient polynomial of var^k. Requires
    /// nonnegative exponents in `var`.
    pub fn univariate_in(&self, var: &str) -> Vec<Poly<K>> {
        let i = match self.vars.iter().position(|v| v == var) {
            Some(i) => i,
            None => return vec![self.clone()],
        };
        let d = self.degree_in(var).unwrap_or(0);
        let low = self.low_degree_in(var).unwrap_or(0);
        assert!(low >= 0, "univariate_in requires nonnegative exponents in {}", var);
        let mut coeffs = vec![Poly::zero(); (d + 1) as usize];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut ne = e.clone();
            ne[i] = 0;
            let mut t = BTreeMap::new();
            t.insert(ne, c.clone());
            let term = Poly { vars: self.vars.clone(), terms: t }.prune();
            coeffs[k] = coeffs[k].add(&term);
        }
        coeffs
    }

    /// Sum of the terms of maximal total degree.
    pub fn leading_form(&self) -> Self {
        let d = match self.total_degree() {
            Some(d) => d,
            None => return Poly::zero(),
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<i32>() == d)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Poly { vars: self.vars.clone(), terms: terms }.prune()
    }

    /// The support as exponent pairs in two given variables; fails if any
    /// other variable occurs.
    pub fn support_bivariate(&self, v1: &str, v2: &str) -> Result<Vec<(i64, i64)>, String> {
        for v in &self.vars {
            if v != v1 && v != v2 && self.depends_on(v) {
                return Err(format!("polynomial depends on extra variable {}", v));
            }
        }
        let i1 = self.vars.iter().position(|v| v == v1);
        let i2 = self.vars.iter().position(|v| v == v2);
        let mut pts: Vec<(i64, i64)> = self
            .terms
            .keys()
            .map(|e| {
                let a = i1.map_or(0, |i| e[i]) as i64;
                let b = i2.map_or(0, |i| e[i]) as i64;
                (a, b)
            })
            .collect();
        pts.sort();
        pts.dedup();
        Ok(pts)
    }
}

/// Graded-lex comparison of exponent vectors (total degree, then lex).
pub fn grlex_cmp(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
    let da: i32 = a.iter().sum();
    let db: i32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Poly<Rat> {
    /// Rational content: gcd of numerators over lcm of denominators, signed
    /// so that the graded-lex leading coefficient of the primitive part is
    /// positive.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return rat(1);
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = Rat::new(num, den);
        let (_, lead) = self.leading_term();
        if lead.is_negative() {
            content = -content;
        }
        content
    }

    /// Divides by the rational content; leading coefficient becomes positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Primitive part with the largest monomial factor also removed.
    pub fn unit_normal(&self) -> Self {
        self.strip_monomial_factor().primitive_part()
    }

    /// Multivariate gcd by primitive remainder sequences, up to units.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let a = self.unit_normal();
        let b = rhs.unit_normal();
        gcd_inner(&a, &b).unit_normal()
    }

    /// Squarefree part: f divided by the gcd of f with all its partials.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let f = self.unit_normal();
        let mut g = f.clone();
        for v in f.vars.clone() {
            let d = f.derivative(&v);
            if !d.is_zero() {
                g = g.gcd(&d);
            }
            if g.is_constant() {
                break;
            }
        }
        if g.is_constant() {
            return f;
        }
        f.try_div_exact(&g)
            .expect("gcd must divide")
            .unit_normal()
    }
}

fn gcd_inner(a: &Poly<Rat>, b: &Poly<Rat>) -> Poly<Rat> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // pick the last variable on which either depends as the main variable
    let var = a
        .vars()
        .iter()
        .chain(b.vars().iter())
        .filter(|v| a.depends_on(v) || b.depends_on(v))
        .last()
        .unwrap()
        .clone();
    if !a.depends_on(&var) || !b.depends_on(&var) {
        // main variable missing from one side: gcd divides its coefficients
        let (with, without) = if a.depends_on(&var) { (a, b) } else { (b, a) };
        let mut g = without.clone();
        for c in with.univariate_in(&var) {
            if !c.is_zero() {
                g = gcd_inner(&g, &c);
            }
            if g.is_constant() {
                return Poly::one();
            }
        }
        return g;
    }
    let (ca, pa) = content_pp(a, &var);
    let (cb, pb) = content_pp(b, &var);
    let cont = gcd_inner(&ca, &cb);
    // primitive PRS in var
    let mut f = pa;
    let mut g = pb;
    if f.degree_in(&var) < g.degree_in(&var) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g, &var);
        if r.is_zero() {
            break;
        }
        let (_, rp) = content_pp(&r, &var);
        f = g;
        g = rp;
        if g.degree_in(&var) == Some(0) {
            g = Poly::one();
            break;
        }
    }
    cont.mul(&g)
}

/// Content (gcd of coefficient polynomials) and primitive part w.r.t. `var`.
fn content_pp(f: &Poly<Rat>, var: &str) -> (Poly<Rat>, Poly<Rat>) {
    let coeffs = f.univariate_in(var);
    let mut cont = Poly::zero();
    for c in &coeffs {
        if !c.is_zero() {
            cont = gcd_inner(&cont, c);
        }
        if cont.is_constant() && !cont.is_zero() {
            cont = Poly::one();
            break;
        }
    }
    let pp = f.try_div_exact(&cont).expect("content must divide");
    (cont, pp)
}

/// Pseudo-remainder of f by g in `var`: lc(g)^(df-dg+1)·f mod g.
fn pseudo_rem(f: &Poly<Rat>, g: &Poly<Rat>, var: &str) -> Poly<Rat> {
    let dg = g.degree_in(var).expect("g nonzero") as usize;
    let gc = g.univariate_in(var);
    let lg = gc[dg].clone();
    let mut r = f.clone();
    while let Some(dr) = r.degree_in(var) {
        if r.is_zero() || (dr as usize) < dg {
            break;
        }
        let rc = r.univariate_in(var);
        let lr = rc[dr as usize].clone();
        let shift = dr as usize - dg;
        // r <- lg*r - lr*g*var^shift
        r = r.mul(&lg).sub(
            &g.mul(&lr)
                .mul_var_pow(var, shift as i32),
        );
    }
    r
}

/// Sylvester resultant eliminating `var`, by fraction-free (Bareiss)
/// elimination over the coefficient ring. `Err` when both inputs are
/// constant in `var`.
pub fn resultant(p: &Poly<Rat>, q: &Poly<Rat>, var: &str) -> Result<Poly<Rat>, ResultantError> {
    if p.is_zero() || q.is_zero() {
        return Err(ResultantError::ZeroInput);
    }
    // clear negative powers of var (unit monomials) before building Sylvester
    let shift = |f: &Poly<Rat>| -> Poly<Rat> {
        let low = f.low_degree_in(var).unwrap_or(0);
        if low < 0 {
            f.mul_var_pow(var, -low)
        } else {
            f.clone()
        }
    };
    let p = shift(p);
    let q = shift(q);
    let m = p.degree_in(var).unwrap_or(0) as usize;
    let n = q.degree_in(var).unwrap_or(0) as usize;
    if m == 0 && n == 0 {
        return Err(ResultantError::BothConstant);
    }
    if m == 0 {
        return Ok(p.pow(n as u32));
    }
    if n == 0 {
        return Ok(q.pow(m as u32));
    }
    let pc = p.univariate_in(var);
    let qc = q.univariate_in(var);
    let size = m + n;
    let mut mat: Vec<Vec<Poly<Rat>>> = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in pc.iter().enumerate() {
            mat[i][i + (m - k)] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + i][i + (n - k)] = c.clone();
        }
    }
    bareiss_determinant(mat).ok_or(ResultantError::Degenerate)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ResultantError {
    #[error("resultant of a zero polynomial")]
    ZeroInput,
    #[error("resultant undefined: both polynomials are constant in the eliminated variable")]
    BothConstant,
    #[error("degenerate elimination")]
    Degenerate,
}

/// Fraction-free determinant (Bareiss). Exact divisions stay in the ring.
fn bareiss_determinant(mut m: Vec<Vec<Poly<Rat>>>) -> Option<Poly<Rat>> {
    let n = m.len();
    if n == 0 {
        return Some(Poly::one());
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        // pivot
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Some(Poly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.try_div_exact(&prev)?;
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if sign { det.neg() } else { det })
}

// ---------------------------------------------------------------------------
// canonical textual form
// ---------------------------------------------------------------------------

impl<K: Scalar> Poly<K> {
    /// Canonical textual serialization. Byte-stable: variables sorted, terms
    /// in descending graded-lex order, coefficients rendered by `K`'s
    /// display (for rationals: `p` or `p/q`).
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<i32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_cmp(b, a));
        let mut out = String::new();
        for (ti, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let cs = format!("{}", c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if ti == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const_term = e.iter().all(|&x| x == 0);
            if mag != "1" || is_const_term {
                factors.push(mag);
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    factors.push(self.vars[i].clone());
                } else {
                    factors.push(format!("{}^{}", self.vars[i], k));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl<K: Scalar> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

// ---------------------------------------------------------------------------
// parser for the canonical form (plus parentheses and whitespace)
// ---------------------------------------------------------------------------

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("polynomial parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly<Rat>, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Rat>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // implicit multiplication: `2M` or `x y`
                Some(c) if c.is_ascii_alphabetic() || c == b'(' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly<Rat>, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e32: i32 = e
                .try_into()
                .map_err(|_| ParseError { pos: self.pos, msg: "exponent too large".into() })?;
            if e32 >= 0 {
                return Ok(base.pow(e32 as u32));
            }
            // negative powers only for single variables (Laurent monomials)
            let mut vs: Vec<&String> = base.vars().iter().collect();
            vs.retain(|v| base.depends_on(v));
            if vs.len() == 1 && base.num_terms() == 1 {
                let v = vs[0].clone();
                let (exps, coeff) = base.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
                let i = base.vars().iter().position(|w| *w == v).unwrap();
                if exps[i] == 1 && exps.iter().enumerate().all(|(j, &x)| j == i || x == 0) {
                    return Ok(Poly::monomial(coeff, &[(&v, e32)]));
                }
            }
            return self.err("negative exponent requires a plain variable");
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly<Rat>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(Poly::constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Ok(Poly::var(name))
            }
            _ => self.err("expected a factor"),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let mut sign = 1i64;
        if self.s.get(self.pos) == Some(&b'-') {
            sign = -1;
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError { pos: start, msg: "integer out of range".into() })?;
        Ok(sign * v)
    }

    fn number(&mut self) -> Result<Rat, ParseError> {
        let n = self.integer()?;
        if self.s.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let d = self.integer()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            return Ok(Rat::new(BigInt::from(n), BigInt::from(d)));
        }
        Ok(Rat::from_integer(BigInt::from(n)))
    }
}

/// Parses the canonical textual polynomial form (rational coefficients).
pub fn parse_poly(s: &str) -> Result<Poly<Rat>, ParseError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(ParseError { pos: p.pos, msg: "trailing input".into() });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pp(s: &str) -> Poly<Rat> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let f = pp("x^2 - 2*x*z + 1");
        let g = pp("x + z");
        let h = f.mul(&g);
        assert_eq!(h, pp("x^3 - x^2*z - 2*x*z^2 + x + z"));
        assert_eq!(pp("1/2*x - -1*x"), pp("3/2*x"));
    }

    #[test]
    fn canonical_round_trip() {
        for s in [
            "0",
            "-3",
            "M^4*L + 1",
            "x^2 + y^2 + z^2 - x*y*z - 2",
            "M^2*u^2 + M^4*u - 3*M^2*u + u + 3*M^2 - M^4 - 1",
        ] {
            let p = pp(s);
            let c = p.canonical_string();
            assert_eq!(parse_poly(&c).unwrap(), p, "round trip through {}", c);
            // byte stability
            assert_eq!(parse_poly(&c).unwrap().canonical_string(), c);
        }
    }

    #[test]
    fn laurent_monomials() {
        let f = pp("M^-2 + 2*M^2");
        assert_eq!(f.degree_in("M"), Some(2));
        assert_eq!(f.low_degree_in("M"), Some(-2));
        assert_eq!(f.strip_monomial_factor(), pp("2*M^4 + 1"));
    }

    #[test]
    fn exact_division() {
        let f = pp("x^2 - z^2");
        let g = pp("x - z");
        assert_eq!(f.try_div_exact(&g).unwrap(), pp("x + z"));
        assert_eq!(pp("x^2 + 1").try_div_exact(&g), None);
        // Laurent unit handling
        let h = pp("M^-1*u + M");
        let d = pp("u + M^2");
        assert_eq!(h.try_div_exact(&d).unwrap(), pp("M^-1"));
    }

    #[test]
    fn resultant_trivial_cases() {
        let u = Poly::var("u");
        let um1 = u.sub(&Poly::one());
        // res(u-1, u-1, u) = 0
        assert_eq!(resultant(&um1, &um1, "u").unwrap(), Poly::zero());
        // res(u^2 - M, u - 1, u) = 1 - M
        let f = pp("u^2 - M");
        assert_eq!(resultant(&f, &um1, "u").unwrap(), pp("1 - M"));
        // both constant in u
        assert_eq!(
            resultant(&pp("M + 1"), &pp("M - 1"), "u"),
            Err(ResultantError::BothConstant)
        );
    }

    #[test]
    fn resultant_vanishes_iff_common_factor() {
        // random-ish products of small factors
        let f1 = pp("u - M").mul(&pp("u + 1"));
        let f2 = pp("u - M").mul(&pp("u - 3"));
        let r = resultant(&f1, &f2, "u").unwrap();
        assert!(r.is_zero());
        let g1 = pp("u - M").mul(&pp("u + 1"));
        let g2 = pp("u - M - 1").mul(&pp("u - 3"));
        let r2 = resultant(&g1, &g2, "u").unwrap();
        assert!(!r2.is_zero());
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = pp("x^2 - z^2").mul(&pp("x + z"));
        let g = pp("x + z").mul(&pp("x + 1"));
        let d = f.gcd(&g);
        assert_eq!(d.unit_normal(), pp("x + z"));
        let sq = pp("x + z").pow(3).mul(&pp("x - z"));
        assert_eq!(sq.squarefree_part(), pp("x^2 - z^2"));
    }

    #[test]
    fn substitution() {
        let f = pp("u^2 + u");
        let v = pp("z - x^2 + 2");
        let g = f.substitute("u", &v);
        let expect = v.mul(&v).add(&v);
        assert_eq!(g, expect);
    }

    #[test]
    fn eval_with_laurent() {
        let f = pp("M + M^-1");
        let mut vals = BTreeMap::new();
        vals.insert("M".to_string(), crate::scalar::ratio(1, 2));
        assert_eq!(f.eval(&vals), crate::scalar::ratio(5, 2));
    }

    #[test]
    fn content_and_sign_normalization() {
        let f = pp("-2*x^2 + 4*x");
        assert_eq!(f.primitive_part(), pp("x^2 - 2*x"));
        assert_eq!(f.content(), rat(-2));
    }
}
