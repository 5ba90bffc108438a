//! Finite fields GF(p^e) and tower extensions GF(q^t), with a runtime
//! `FieldSpec` carrying the modulus polynomial.
//!
//! A prime field stores residues directly. An extension of degree e over its
//! base stores elements as coefficient vectors of length e over the base, so
//! the inclusion of the base into a tower extension is the identity on
//! coefficient vectors. The modulus is the least monic irreducible of the
//! requested degree, where "least" orders coefficient vectors by their
//! ascending base-q integer encoding (constant coefficient least significant).
//! Irreducibility is certified by trial division against every monic
//! polynomial of degree at most e/2. Total cardinality is capped at 2^62.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;
use std::sync::Arc;

/// Element data: a residue for prime fields, a coefficient vector over the
/// base field for extensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Repr {
    Prime(u64),
    Ext(Vec<Repr>),
}

pub struct FieldSpec {
    base: Option<Arc<FieldSpec>>,
    p: u64,
    /// Extension degree over the base (1 for a prime field).
    degree: usize,
    /// Low coefficients of the monic modulus: y^degree + sum modulus[i] y^i.
    /// For a prime field this is the polynomial y, i.e. `[0]`.
    modulus: Vec<Repr>,
    cardinality: u128,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.degree == other.degree
            && self.modulus == other.modulus
            && match (&self.base, &other.base) {
                (None, None) => true,
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || **a == **b,
                _ => false,
            }
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.notation())
    }
}

const CARD_GUARD: u128 = 1 << 62;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldSpec {
    /// The prime field Z/p.
    pub fn prime(p: u64) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Arc::new(FieldSpec {
            base: None,
            p,
            degree: 1,
            modulus: vec![Repr::Prime(0)],
            cardinality: p as u128,
        }))
    }

    /// GF(p^e) over the prime field.
    pub fn make(p: u64, e: usize) -> Result<Arc<FieldSpec>> {
        let base = FieldSpec::prime(p)?;
        FieldSpec::extend(&base, e)
    }

    /// Degree-t tower extension of `base`. Returns `base` itself for t = 1.
    pub fn extend(base: &Arc<FieldSpec>, t: usize) -> Result<Arc<FieldSpec>> {
        if t == 0 {
            return Err(Error::InvalidParam("extension degree must be >= 1".into()));
        }
        if t == 1 {
            return Ok(base.clone());
        }
        let mut card = base.cardinality;
        for _ in 1..t {
            card = card
                .checked_mul(base.cardinality)
                .ok_or(Error::FieldTooLarge)?;
            if card > CARD_GUARD {
                return Err(Error::FieldTooLarge);
            }
        }
        let modulus = base.least_irreducible(t)?;
        Ok(Arc::new(FieldSpec {
            base: Some(base.clone()),
            p: base.p,
            degree: t,
            modulus,
            cardinality: card,
        }))
    }

    /// Smallest extension of `base` with at least `min_card` elements.
    pub fn extend_to_cardinality(base: &Arc<FieldSpec>, min_card: u128) -> Result<Arc<FieldSpec>> {
        let mut t = 1usize;
        let mut card = base.cardinality;
        while card < min_card {
            card = card
                .checked_mul(base.cardinality)
                .ok_or(Error::FieldTooLarge)?;
            t += 1;
            if card > CARD_GUARD {
                return Err(Error::FieldTooLarge);
            }
        }
        FieldSpec::extend(base, t)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn cardinality(&self) -> u128 {
        self.cardinality
    }

    pub fn degree_over_base(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<FieldSpec>> {
        self.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    /// Low coefficients of the monic modulus over the base field.
    pub fn modulus(&self) -> &[Repr] {
        &self.modulus
    }

    /// Serialized name: "p^e" for GF(p^e), with ":t" appended per tower level.
    pub fn notation(&self) -> String {
        match &self.base {
            None => format!("{}^1", self.p),
            Some(b) => {
                if b.base.is_none() {
                    format!("{}^{}", self.p, self.degree)
                } else {
                    format!("{}:{}", b.notation(), self.degree)
                }
            }
        }
    }

    /// Parse "p", "p^e", or "p^e:t1:t2:...".
    pub fn parse(s: &str) -> Result<Arc<FieldSpec>> {
        let mut parts = s.split(':');
        let head = parts.next().ok_or_else(|| Error::Parse(s.into()))?;
        let (p, e) = match head.split_once('^') {
            None => (head, "1"),
            Some((p, e)) => (p, e),
        };
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad characteristic in {s:?}")))?;
        let e: usize = e
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
        if e == 0 {
            return Err(Error::Parse(format!("zero degree in {s:?}")));
        }
        let mut field = FieldSpec::make(p, e)?;
        for t in parts {
            let t: usize = t
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad tower degree in {s:?}")))?;
            field = FieldSpec::extend(&field, t)?;
        }
        Ok(field)
    }

    // ----- element arithmetic on Repr -----

    pub fn zero(&self) -> Repr {
        match &self.base {
            None => Repr::Prime(0),
            Some(b) => Repr::Ext(vec![b.zero(); self.degree]),
        }
    }

    pub fn one(&self) -> Repr {
        match &self.base {
            None => Repr::Prime(1 % self.p),
            Some(b) => {
                let mut v = vec![b.zero(); self.degree];
                v[0] = b.one();
                Repr::Ext(v)
            }
        }
    }

    pub fn is_zero(&self, a: &Repr) -> bool {
        match a {
            Repr::Prime(x) => *x == 0,
            Repr::Ext(v) => {
                let b = self.base.as_ref().expect("ext repr in prime field");
                v.iter().all(|c| b.is_zero(c))
            }
        }
    }

    pub fn add(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Prime(x), Repr::Prime(y)) => Repr::Prime((x + y) % self.p),
            (Repr::Ext(u), Repr::Ext(v)) => {
                let base = self.base.as_ref().unwrap();
                Repr::Ext(
                    u.iter()
                        .zip(v.iter())
                        .map(|(x, y)| base.add(x, y))
                        .collect(),
                )
            }
            _ => panic!("mixed element shapes"),
        }
    }

    pub fn neg(&self, a: &Repr) -> Repr {
        match a {
            Repr::Prime(x) => Repr::Prime(if *x == 0 { 0 } else { self.p - x }),
            Repr::Ext(v) => {
                let base = self.base.as_ref().unwrap();
                Repr::Ext(v.iter().map(|c| base.neg(c)).collect())
            }
        }
    }

    pub fn sub(&self, a: &Repr, b: &Repr) -> Repr {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Prime(x), Repr::Prime(y)) => Repr::Prime(mulmod(*x, *y, self.p)),
            (Repr::Ext(u), Repr::Ext(v)) => {
                let base = self.base.as_ref().unwrap();
                let e = self.degree;
                let mut prod = vec![base.zero(); 2 * e - 1];
                for (i, x) in u.iter().enumerate() {
                    if base.is_zero(x) {
                        continue;
                    }
                    for (j, y) in v.iter().enumerate() {
                        if base.is_zero(y) {
                            continue;
                        }
                        let t = base.mul(x, y);
                        prod[i + j] = base.add(&prod[i + j], &t);
                    }
                }
                // reduce modulo the monic modulus
                for i in (e..2 * e - 1).rev() {
                    if base.is_zero(&prod[i]) {
                        continue;
                    }
                    let c = prod[i].clone();
                    for (j, m) in self.modulus.iter().enumerate() {
                        let t = base.mul(&c, m);
                        prod[i - e + j] = base.sub(&prod[i - e + j], &t);
                    }
                    prod[i] = base.zero();
                }
                prod.truncate(e);
                Repr::Ext(prod)
            }
            _ => panic!("mixed element shapes"),
        }
    }

    pub fn inv(&self, a: &Repr) -> Result<Repr> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Repr::Prime(x) => Ok(Repr::Prime(powmod(*x, self.p - 2, self.p))),
            Repr::Ext(v) => {
                let base = self.base.as_ref().unwrap();
                // extended Euclid on v and the modulus over the base field
                let mut full_mod = self.modulus.clone();
                full_mod.push(base.one());
                let inv = poly_ext_gcd_inverse(base, v, &full_mod)?;
                let mut out = inv;
                out.resize(self.degree, base.zero());
                Ok(Repr::Ext(out))
            }
        }
    }

    pub fn div(&self, a: &Repr, b: &Repr) -> Result<Repr> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Repr, mut k: u128) -> Repr {
        let mut acc = self.one();
        let mut sq = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            k >>= 1;
        }
        acc
    }

    /// Integer embedding c mod p.
    pub fn from_u64(&self, c: u64) -> Repr {
        match &self.base {
            None => Repr::Prime(c % self.p),
            Some(b) => {
                let mut v = vec![b.zero(); self.degree];
                v[0] = b.from_u64(c);
                Repr::Ext(v)
            }
        }
    }

    /// Canonical integer encoding: base-q digits of the coefficient vector,
    /// constant coefficient least significant, recursively.
    pub fn index_of(&self, a: &Repr) -> u128 {
        match a {
            Repr::Prime(x) => *x as u128,
            Repr::Ext(v) => {
                let base = self.base.as_ref().unwrap();
                let q = base.cardinality;
                let mut idx = 0u128;
                for c in v.iter().rev() {
                    idx = idx * q + base.index_of(c);
                }
                idx
            }
        }
    }

    pub fn from_index(&self, idx: u128) -> Result<Repr> {
        if idx >= self.cardinality {
            return Err(Error::InvalidParam(format!(
                "element index {idx} out of range for field of order {}",
                self.cardinality
            )));
        }
        Ok(self.from_index_unchecked(idx))
    }

    fn from_index_unchecked(&self, mut idx: u128) -> Repr {
        match &self.base {
            None => Repr::Prime(idx as u64),
            Some(b) => {
                let q = b.cardinality;
                let mut v = Vec::with_capacity(self.degree);
                for _ in 0..self.degree {
                    v.push(b.from_index_unchecked(idx % q));
                    idx /= q;
                }
                Repr::Ext(v)
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Repr> + '_ {
        (0..self.cardinality).map(|i| self.from_index_unchecked(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Repr {
        let idx = rng.gen_range(0..self.cardinality);
        self.from_index_unchecked(idx)
    }

    /// Embed an element of `src` into this field, where this field is `src`
    /// itself or a tower built over it.
    pub fn embed_from(&self, src: &FieldSpec, a: &Repr) -> Result<Repr> {
        if self == src {
            return Ok(a.clone());
        }
        match &self.base {
            Some(b) => {
                let inner = b.embed_from(src, a)?;
                let mut v = vec![b.zero(); self.degree];
                v[0] = inner;
                Ok(Repr::Ext(v))
            }
            None => Err(Error::FieldMismatch),
        }
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, a: &Repr) -> Repr {
        self.pow(a, self.p as u128)
    }

    // ----- modulus search -----

    fn least_irreducible(self: &Arc<Self>, t: usize) -> Result<Vec<Repr>> {
        let q = self.cardinality;
        let total = q
            .checked_pow(t as u32)
            .ok_or(Error::FieldTooLarge)?;
        for idx in 0..total {
            let mut coeffs = Vec::with_capacity(t);
            let mut rest = idx;
            for _ in 0..t {
                coeffs.push(self.from_index_unchecked(rest % q));
                rest /= q;
            }
            if self.monic_is_irreducible(&coeffs, t) {
                return Ok(coeffs);
            }
        }
        unreachable!("an irreducible of every degree exists over a finite field")
    }

    /// Trial division of y^t + low(y) by every monic polynomial of degree
    /// 1..=t/2 over this field.
    fn monic_is_irreducible(&self, low: &[Repr], t: usize) -> bool {
        let mut f = low.to_vec();
        f.push(self.one());
        let q = self.cardinality;
        for d in 1..=t / 2 {
            let count = q.pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut rest = idx;
                for _ in 0..d {
                    g.push(self.from_index_unchecked(rest % q));
                    rest /= q;
                }
                g.push(self.one());
                let (_, r) = poly_divmod(self, &f, &g);
                if r.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn wrap(self: &Arc<Self>, repr: Repr) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            repr,
        }
    }

    pub fn element(self: &Arc<Self>, idx: u128) -> Result<FieldElement> {
        Ok(self.wrap(self.from_index(idx)?))
    }
}

// ----- dense univariate polynomials over a field, low-to-high, trimmed -----

pub(crate) fn poly_trim(field: &FieldSpec, mut v: Vec<Repr>) -> Vec<Repr> {
    while let Some(last) = v.last() {
        if field.is_zero(last) {
            v.pop();
        } else {
            break;
        }
    }
    v
}

pub(crate) fn poly_divmod(field: &FieldSpec, num: &[Repr], den: &[Repr]) -> (Vec<Repr>, Vec<Repr>) {
    let den = poly_trim(field, den.to_vec());
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem = poly_trim(field, num.to_vec());
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![field.zero(); rem.len() - dd];
    let lead_inv = field.inv(den.last().unwrap()).expect("monic or nonzero lead");
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let c = field.mul(rem.last().unwrap(), &lead_inv);
        quo[shift] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            let t = field.mul(&c, dc);
            rem[shift + i] = field.sub(&rem[shift + i], &t);
        }
        rem = poly_trim(field, rem);
    }
    (poly_trim(field, quo), rem)
}

fn poly_mul(field: &FieldSpec, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &t);
        }
    }
    poly_trim(field, out)
}

fn poly_sub(field: &FieldSpec, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| field.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| field.zero());
        out.push(field.sub(&x, &y));
    }
    poly_trim(field, out)
}

/// Inverse of `a` modulo `m` (gcd must be 1; `m` the field modulus).
fn poly_ext_gcd_inverse(field: &FieldSpec, a: &[Repr], m: &[Repr]) -> Result<Vec<Repr>> {
    // invariants: r0 = s0*a mod m, r1 = s1*a mod m
    let mut r0 = poly_trim(field, m.to_vec());
    let mut r1 = poly_trim(field, a.to_vec());
    let mut s0: Vec<Repr> = Vec::new();
    let mut s1 = vec![field.one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(field, &r0, &r1);
        let qs = poly_mul(field, &q, &s1);
        let s = poly_sub(field, &s0, &qs);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd; must be a nonzero constant
    if r0.len() != 1 {
        return Err(Error::DivisionByZero);
    }
    let c = field.inv(&r0[0])?;
    Ok(s0.iter().map(|x| field.mul(x, &c)).collect())
}

/// A field element together with its owning field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.repr == other.repr
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn into_repr(self) -> Repr {
        self.repr
    }

    pub fn index(&self) -> u128 {
        self.spec.index_of(&self.repr)
    }

    pub fn is_zero(&self) -> bool {
        self.spec.is_zero(&self.repr)
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.spec.wrap(self.spec.add(&self.repr, &other.repr)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.spec.wrap(self.spec.sub(&self.repr, &other.repr)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.spec.wrap(self.spec.mul(&self.repr, &other.repr)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.spec.wrap(self.spec.div(&self.repr, &other.repr)?))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.spec.wrap(self.spec.inv(&self.repr)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.spec.wrap(self.spec.neg(&self.repr))
    }

    pub fn pow(&self, k: u128) -> FieldElement {
        self.spec.wrap(self.spec.pow(&self.repr, k))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_arithmetic_tables() {
        let f7 = FieldSpec::prime(7).unwrap();
        for a in 0..7u128 {
            for b in 0..7u128 {
                let x = f7.from_index(a).unwrap();
                let y = f7.from_index(b).unwrap();
                assert_eq!(f7.index_of(&f7.add(&x, &y)), (a + b) % 7);
                assert_eq!(f7.index_of(&f7.mul(&x, &y)), (a * b) % 7);
            }
        }
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(matches!(FieldSpec::prime(6), Err(Error::NotPrime(6))));
        assert!(matches!(FieldSpec::make(9, 1), Err(Error::NotPrime(9))));
    }

    #[test]
    fn f4_modulus_is_pinned() {
        // the only monic irreducible quadratic over F_2 is y^2 + y + 1
        let f4 = FieldSpec::make(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[Repr::Prime(1), Repr::Prime(1)]);
        assert_eq!(f4.cardinality(), 4);
    }

    #[test]
    fn f8_modulus_search_order() {
        // y^3 + y + 1 encodes as 3, y^3 + y^2 + 1 as 5; the search takes the former
        let f8 = FieldSpec::make(2, 3).unwrap();
        assert_eq!(
            f8.modulus(),
            &[Repr::Prime(1), Repr::Prime(1), Repr::Prime(0)]
        );
    }

    #[test]
    fn extension_field_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in [
            FieldSpec::make(2, 4).unwrap(),
            FieldSpec::make(3, 2).unwrap(),
            FieldSpec::extend(&FieldSpec::make(2, 2).unwrap(), 3).unwrap(),
        ] {
            for _ in 0..200 {
                let a = field.random(&mut rng);
                let b = field.random(&mut rng);
                let c = field.random(&mut rng);
                let ab_c = field.mul(&field.mul(&a, &b), &c);
                let a_bc = field.mul(&a, &field.mul(&b, &c));
                assert_eq!(ab_c, a_bc);
                let distl = field.mul(&a, &field.add(&b, &c));
                let distr = field.add(&field.mul(&a, &b), &field.mul(&a, &c));
                assert_eq!(distl, distr);
                if !field.is_zero(&a) {
                    let inv = field.inv(&a).unwrap();
                    assert_eq!(field.mul(&a, &inv), field.one());
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_order() {
        for field in [FieldSpec::make(2, 4).unwrap(), FieldSpec::make(5, 2).unwrap()] {
            let q = field.cardinality();
            for a in field.elements() {
                if field.is_zero(&a) {
                    continue;
                }
                assert_eq!(field.pow(&a, q - 1), field.one());
            }
        }
    }

    #[test]
    fn frobenius_is_additive_and_fixes_prime_subfield() {
        let f9 = FieldSpec::make(3, 2).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                let lhs = f9.frobenius(&f9.add(&a, &b));
                let rhs = f9.add(&f9.frobenius(&a), &f9.frobenius(&b));
                assert_eq!(lhs, rhs);
            }
        }
        for c in 0..3u64 {
            let x = f9.from_u64(c);
            assert_eq!(f9.frobenius(&x), x);
        }
    }

    #[test]
    fn tower_embedding_is_identity_on_coefficients() {
        let f4 = FieldSpec::make(2, 2).unwrap();
        let f64t = FieldSpec::extend(&f4, 3).unwrap();
        assert_eq!(f64t.cardinality(), 64);
        for a in f4.elements() {
            let img = f64t.embed_from(&f4, &a).unwrap();
            if let Repr::Ext(v) = &img {
                assert_eq!(v[0], a);
                assert!(f4.is_zero(&v[1]) && f4.is_zero(&v[2]));
            } else {
                panic!("expected ext repr");
            }
            // embedding is a ring homomorphism
            for b in f4.elements() {
                let prod_then_embed = f64t.embed_from(&f4, &f4.mul(&a, &b)).unwrap();
                let embed_then_prod = f64t.mul(&img, &f64t.embed_from(&f4, &b).unwrap());
                assert_eq!(prod_then_embed, embed_then_prod);
            }
        }
    }

    #[test]
    fn size_guard_rejects_large_fields() {
        assert!(matches!(FieldSpec::make(2, 63), Err(Error::FieldTooLarge)));
        assert!(FieldSpec::make(2, 16).is_ok());
    }

    #[test]
    fn notation_round_trips() {
        for s in ["2^1", "3^1", "2^2", "5^2", "2^2:3"] {
            let f = FieldSpec::parse(s).unwrap();
            assert_eq!(f.notation(), s);
            let g = FieldSpec::parse(&f.notation()).unwrap();
            assert_eq!(*f, *g);
        }
        assert_eq!(FieldSpec::parse("7").unwrap().notation(), "7^1");
    }

    #[test]
    fn index_round_trip() {
        let f16 = FieldSpec::make(2, 4).unwrap();
        for i in 0..16u128 {
            assert_eq!(f16.index_of(&f16.from_index(i).unwrap()), i);
        }
        assert!(f16.from_index(16).is_err());
    }

    #[test]
    fn mixed_field_operands_error() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f3 = FieldSpec::prime(3).unwrap();
        let a = f2.element(1).unwrap();
        let b = f3.element(1).unwrap();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch)));
    }
}
