//! Sparse multivariate polynomials over a finite field with the graded
//! lexicographic order (degree first, then lex with x1 > x2 > ... > xn),
//! Hasse derivatives, multiplicity at a point, top-degree parts, and the
//! action of upper-triangular matrices on the variables.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, Repr};
use crate::util::binom_mod_p;
use rand::Rng;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// An exponent vector. Ordered by grlex: total degree first, then the first
/// coordinate where the vectors differ (so x1 > x2 > ... > xn).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut v = vec![0; arity];
        v[i] = 1;
        Monomial(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    /// Coordinatewise difference self - other if nonnegative.
    pub fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if b > a {
                return None;
            }
            v.push(a - b);
        }
        Some(Monomial(v))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.0.len(), other.0.len(), "arity mismatch in grlex");
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (i, e) in self.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            if any {
                write!(f, "*")?;
            }
            any = true;
            if *e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if !any {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of the given total degree, ascending grlex.
pub fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; arity];
    fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for a in 0..=left {
            cur[pos] = a;
            rec(out, cur, pos + 1, left - a);
        }
        cur[pos] = 0;
    }
    if arity == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut out, &mut cur, 0, degree);
    out
}

/// All monomials of total degree at most `degree`, ascending grlex.
pub fn monomials_up_to_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    (0..=degree)
        .flat_map(|d| monomials_of_degree(arity, d))
        .collect()
}

/// Multiplicity of a polynomial at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

/// Sparse polynomial; terms in strictly decreasing grlex order, coefficients
/// nonzero.
#[derive(Clone, Debug)]
pub struct Polynomial {
    field: Arc<FieldSpec>,
    arity: usize,
    terms: Vec<(Monomial, Repr)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.arity == other.arity && self.terms == other.terms
    }
}

impl Polynomial {
    pub fn zero(field: Arc<FieldSpec>, arity: usize) -> Self {
        Polynomial {
            field,
            arity,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: Arc<FieldSpec>, arity: usize, c: Repr) -> Self {
        Polynomial::from_terms(field, arity, vec![(Monomial::one(arity), c)])
    }

    pub fn variable(field: Arc<FieldSpec>, arity: usize, i: usize) -> Self {
        let one = field.one();
        Polynomial::from_terms(field, arity, vec![(Monomial::var(arity, i), one)])
    }

    pub fn monomial(field: Arc<FieldSpec>, m: Monomial, c: Repr) -> Self {
        let arity = m.arity();
        Polynomial::from_terms(field, arity, vec![(m, c)])
    }

    /// Normalize an arbitrary term list: sort descending, merge, drop zeros.
    pub fn from_terms(field: Arc<FieldSpec>, arity: usize, terms: Vec<(Monomial, Repr)>) -> Self {
        let mut map: BTreeMap<Monomial, Repr> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity mismatch");
            match map.get_mut(&m) {
                Some(old) => *old = field.add(old, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let terms: Vec<_> = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        Polynomial {
            field,
            arity,
            terms,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Monomial, Repr)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.weight()).max()
    }

    /// Leading (grlex-greatest) term.
    pub fn leading(&self) -> Option<(&Monomial, &Repr)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> Repr {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.weight();
                self.terms.iter().all(|(mm, _)| mm.weight() == d)
            }
        }
    }

    fn compat(&self, other: &Polynomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compat(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Polynomial::from_terms(
            self.field.clone(),
            self.arity,
            terms,
        ))
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.field;
        Polynomial {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Repr) -> Polynomial {
        let f = &self.field;
        if f.is_zero(c) {
            return Polynomial::zero(self.field.clone(), self.arity);
        }
        Polynomial {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), f.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compat(other)?;
        let f = &self.field;
        let mut map: BTreeMap<Monomial, Repr> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = f.mul(c1, c2);
                match map.get_mut(&m) {
                    Some(old) => *old = f.add(old, &c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let terms: Vec<_> = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !f.is_zero(c))
            .collect();
        Ok(Polynomial {
            field: self.field.clone(),
            arity: self.arity,
            terms,
        })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.field.clone(), self.arity, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    pub fn eval(&self, point: &[Repr]) -> Result<Repr> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch(point.len(), self.arity));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    t = f.mul(&t, &f.pow(&point[i], *e as u128));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitute polynomials for the variables.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.arity {
            return Err(Error::ArityMismatch(subs.len(), self.arity));
        }
        for s in subs {
            if *s.field != *self.field {
                return Err(Error::FieldMismatch);
            }
        }
        let out_arity = subs
            .first()
            .map(|s| s.arity)
            .unwrap_or(self.arity);
        let f = self.field.clone();
        let mut acc = Polynomial::zero(f.clone(), out_arity);
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = subs
            .iter()
            .map(|s| vec![Polynomial::constant(f.clone(), out_arity, f.one()), s.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(f.clone(), out_arity, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                let e = *e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&subs[i])?;
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e])?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Hasse derivative with multi-index i: coefficient C(lambda, i) taken
    /// coordinatewise modulo the characteristic.
    pub fn hasse_derivative(&self, idx: &Monomial) -> Result<Polynomial> {
        if idx.arity() != self.arity {
            return Err(Error::ArityMismatch(idx.arity(), self.arity));
        }
        let f = &self.field;
        let p = f.characteristic();
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let Some(shifted) = m.checked_sub(idx) else {
                continue;
            };
            let mut coef = 1u64;
            for (a, b) in m.0.iter().zip(&idx.0) {
                coef = (coef * binom_mod_p(*a as u64, *b as u64, p)) % p;
                if coef == 0 {
                    break;
                }
            }
            if coef == 0 {
                continue;
            }
            let scaled = f.mul(c, &f.from_u64(coef));
            terms.push((shifted, scaled));
        }
        Ok(Polynomial::from_terms(
            self.field.clone(),
            self.arity,
            terms,
        ))
    }

    /// Value of the Hasse derivative with index `idx` at `point`, computed
    /// termwise without materializing the derivative.
    pub fn hasse_eval(&self, idx: &Monomial, point: &[Repr]) -> Result<Repr> {
        if idx.arity() != self.arity {
            return Err(Error::ArityMismatch(idx.arity(), self.arity));
        }
        if point.len() != self.arity {
            return Err(Error::ArityMismatch(point.len(), self.arity));
        }
        let f = &self.field;
        let p = f.characteristic();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let Some(shifted) = m.checked_sub(idx) else {
                continue;
            };
            let mut coef = 1u64;
            for (a, b) in m.0.iter().zip(&idx.0) {
                coef = (coef * binom_mod_p(*a as u64, *b as u64, p)) % p;
                if coef == 0 {
                    break;
                }
            }
            if coef == 0 {
                continue;
            }
            let mut t = f.mul(c, &f.from_u64(coef));
            for (i, e) in shifted.0.iter().enumerate() {
                if *e > 0 {
                    t = f.mul(&t, &f.pow(&point[i], *e as u128));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Largest N such that every Hasse derivative of weight < N vanishes at
    /// the point; Infinite for the zero polynomial.
    pub fn multiplicity(&self, point: &[Repr]) -> Result<Multiplicity> {
        if self.is_zero() {
            return Ok(Multiplicity::Infinite);
        }
        let deg = self.degree().unwrap();
        for w in 0..=deg {
            for idx in monomials_of_degree(self.arity, w) {
                if !self.field.is_zero(&self.hasse_eval(&idx, point)?) {
                    return Ok(Multiplicity::Finite(w));
                }
            }
        }
        // the weight-deg derivative at the grlex-leading exponent is a
        // nonzero constant, so this point is unreachable
        unreachable!("nonzero polynomial has finite multiplicity")
    }

    /// Top-degree part.
    pub fn hd(&self) -> Polynomial {
        match self.degree() {
            None => self.clone(),
            Some(d) => Polynomial {
                field: self.field.clone(),
                arity: self.arity,
                terms: self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.weight() == d)
                    .cloned()
                    .collect(),
            },
        }
    }

    /// Map coefficients into a tower extension of the coefficient field.
    pub fn extend_scalars(&self, target: &Arc<FieldSpec>) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), target.embed_from(&self.field, c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            field: target.clone(),
            arity: self.arity,
            terms,
        })
    }

    /// Normalize the leading coefficient to 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).unwrap();
                self.scale(&inv)
            }
        }
    }

    /// Canonical text form: terms in decreasing grlex, coefficients printed
    /// as their canonical integer encoding, e.g. "1*x1^2*x2 + 2*x2 + 1".
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let ci = self.field.index_of(c);
            if m.weight() == 0 {
                parts.push(format!("{ci}"));
            } else if ci == 1 {
                parts.push(format!("{m}"));
            } else {
                parts.push(format!("{ci}*{m}"));
            }
        }
        parts.join(" + ")
    }

    /// Parse the canonical text form.
    pub fn parse(field: &Arc<FieldSpec>, arity: usize, s: &str) -> Result<Polynomial> {
        let s = s.trim();
        if s == "0" {
            return Ok(Polynomial::zero(field.clone(), arity));
        }
        let mut terms = Vec::new();
        for chunk in s.split('+') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let mut coeff: u128 = 1;
            let mut expo = vec![0u32; arity];
            let mut saw_coeff = false;
            for factor in chunk.split('*') {
                let factor = factor.trim();
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, pow) = match rest.split_once('^') {
                        None => (rest, "1"),
                        Some((v, p)) => (v, p),
                    };
                    let vi: usize = var
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable in {factor:?}")))?;
                    if vi == 0 || vi > arity {
                        return Err(Error::Parse(format!(
                            "variable x{vi} out of range 1..={arity}"
                        )));
                    }
                    let pw: u32 = pow
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    expo[vi - 1] += pw;
                } else {
                    if saw_coeff {
                        return Err(Error::Parse(format!("two coefficients in {chunk:?}")));
                    }
                    saw_coeff = true;
                    coeff = factor
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
                }
            }
            let c = field.from_index(coeff % field.cardinality())?;
            terms.push((Monomial(expo), c));
        }
        Ok(Polynomial::from_terms(field.clone(), arity, terms))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Invertible upper-triangular matrix acting on the variables by
/// x |-> x g (row vector convention), i.e. x_k |-> sum_{i<=k} g[i][k] x_i.
#[derive(Clone, Debug)]
pub struct BorelMatrix {
    field: Arc<FieldSpec>,
    n: usize,
    entries: Vec<Vec<Repr>>,
}

impl BorelMatrix {
    pub fn new(field: Arc<FieldSpec>, entries: Vec<Vec<Repr>>) -> Result<BorelMatrix> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParam("non-square matrix".into()));
            }
            for (j, e) in row.iter().enumerate() {
                if j < i && !field.is_zero(e) {
                    return Err(Error::InvalidParam(
                        "matrix is not upper triangular".into(),
                    ));
                }
                if j == i && field.is_zero(e) {
                    return Err(Error::InvalidParam(
                        "zero diagonal entry: matrix not invertible".into(),
                    ));
                }
            }
        }
        Ok(BorelMatrix { field, n, entries })
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> BorelMatrix {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        BorelMatrix { field, n, entries }
    }

    /// Elementary transvection: identity plus c in position (j, i), j < i.
    pub fn transvection(field: Arc<FieldSpec>, n: usize, j: usize, i: usize, c: Repr) -> Result<BorelMatrix> {
        if j >= i || i >= n {
            return Err(Error::InvalidParam("need j < i < n".into()));
        }
        let mut g = BorelMatrix::identity(field, n);
        g.entries[j][i] = c;
        Ok(g)
    }

    pub fn random<R: Rng + ?Sized>(field: &Arc<FieldSpec>, n: usize, rng: &mut R) -> BorelMatrix {
        let q = field.cardinality();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j < i {
                            field.zero()
                        } else if j == i {
                            field
                                .from_index(1 + rng.gen_range(0..q - 1))
                                .unwrap()
                        } else {
                            field.random(rng)
                        }
                    })
                    .collect()
            })
            .collect();
        BorelMatrix {
            field: field.clone(),
            n,
            entries,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<Repr>] {
        &self.entries
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &BorelMatrix) -> Result<BorelMatrix> {
        if self.n != other.n || *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let n = self.n;
        let mut entries = vec![vec![f.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    let t = f.mul(&self.entries[i][k], &other.entries[k][j]);
                    acc = f.add(&acc, &t);
                }
                entries[i][j] = acc;
            }
        }
        BorelMatrix::new(self.field.clone(), entries)
    }

    /// ^g f (x) = f(x g). Substitutes x_k by sum_i g[i][k] x_i.
    pub fn act(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.arity() != self.n {
            return Err(Error::ArityMismatch(f.arity(), self.n));
        }
        if **f.field() != *self.field {
            return Err(Error::FieldMismatch);
        }
        let subs: Vec<Polynomial> = (0..self.n)
            .map(|k| {
                let terms = (0..self.n)
                    .map(|i| (Monomial::var(self.n, i), self.entries[i][k].clone()))
                    .collect();
                Polynomial::from_terms(self.field.clone(), self.n, terms)
            })
            .collect();
        f.compose(&subs)
    }
}

/// Convenience: polynomial from (exponents, coefficient-index) pairs.
pub fn poly_from_indices(
    field: &Arc<FieldSpec>,
    arity: usize,
    terms: &[(&[u32], u128)],
) -> Result<Polynomial> {
    let mut out = Vec::new();
    for (e, ci) in terms {
        if e.len() != arity {
            return Err(Error::ArityMismatch(e.len(), arity));
        }
        out.push((Monomial(e.to_vec()), field.from_index(*ci)?));
    }
    Ok(Polynomial::from_terms(field.clone(), arity, out))
}

/// A linear form c . x as a degree-1 polynomial.
pub fn linear_form(field: &Arc<FieldSpec>, coeffs: &[Repr]) -> Polynomial {
    let n = coeffs.len();
    let terms = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (Monomial::var(n, i), c.clone()))
        .collect();
    Polynomial::from_terms(field.clone(), n, terms)
}

pub fn field_elements_vec(v: &[FieldElement]) -> Vec<Repr> {
    v.iter().map(|e| e.repr().clone()).collect()
}
