//! Zero-dimensional quotient algebras: vanishing ideals of point sets with
//! multiplicity (dual Buchberger-Moller sweep), normal forms, quotient
//! dimensions, initial and top-degree structure, and degree-truncated
//! quotients by homogeneous ideals.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Repr};
use crate::linalg::{rref, Echelon, Tracked, TrackedEchelon};
use crate::poly::{monomials_of_degree, monomials_up_to_degree, Monomial, Polynomial};
use crate::util::{binom, check_guard};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

/// A finite set of distinct points in F^n.
#[derive(Clone, Debug)]
pub struct PointSet {
    field: Arc<FieldSpec>,
    arity: usize,
    points: Vec<Vec<Repr>>,
}

impl PointSet {
    pub fn new(field: Arc<FieldSpec>, arity: usize, points: Vec<Vec<Repr>>) -> Result<PointSet> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != arity {
                return Err(Error::BadPoint {
                    index: i,
                    msg: format!("expected {arity} coordinates, got {}", p.len()),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            let key: Vec<u128> = p.iter().map(|c| field.index_of(c)).collect();
            if !seen.insert(key) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        Ok(PointSet {
            field,
            arity,
            points,
        })
    }

    pub fn from_indices(field: Arc<FieldSpec>, arity: usize, pts: &[Vec<u128>]) -> Result<PointSet> {
        let mut points = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let mut row = Vec::with_capacity(p.len());
            for c in p {
                row.push(field.from_index(*c).map_err(|e| Error::BadPoint {
                    index: i,
                    msg: e.to_string(),
                })?);
            }
            points.push(row);
        }
        PointSet::new(field, arity, points)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Repr>] {
        &self.points
    }

    pub fn contains(&self, p: &[Repr]) -> bool {
        self.points.iter().any(|q| q.as_slice() == p)
    }

    /// JSON schema: {"field": "p^e", "n": ..., "points": [[idx, ...], ...]}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.notation(),
            "n": self.arity,
            "points": self
                .points
                .iter()
                .map(|p| p.iter().map(|c| self.field.index_of(c) as u64).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PointSet> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("point set: expected an object".into()))?;
        let field_s = obj
            .get("field")
            .and_then(|f| f.as_str())
            .ok_or_else(|| Error::Parse("point set: missing \"field\"".into()))?;
        let field = FieldSpec::parse(field_s)?;
        let n = obj
            .get("n")
            .and_then(|n| n.as_u64())
            .ok_or_else(|| Error::Parse("point set: missing \"n\"".into()))? as usize;
        let pts = obj
            .get("points")
            .and_then(|p| p.as_array())
            .ok_or_else(|| Error::Parse("point set: missing \"points\"".into()))?;
        let mut rows = Vec::with_capacity(pts.len());
        for p in pts {
            let arr = p
                .as_array()
                .ok_or_else(|| Error::Parse("point set: point is not an array".into()))?;
            let row = arr
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|x| x as u128)
                        .ok_or_else(|| Error::Parse("point set: bad coordinate".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        PointSet::from_indices(field, n, &rows)
    }
}

/// F[x]/I presented by a downward-closed standard-monomial basis plus one
/// reducer per minimal generator of the initial ideal (tail supported on
/// standard monomials).
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    field: Arc<FieldSpec>,
    arity: usize,
    std: Vec<Monomial>,
    std_index: HashMap<Monomial, usize>,
    reducers: Vec<Polynomial>,
}

impl QuotientAlgebra {
    pub fn new(
        field: Arc<FieldSpec>,
        arity: usize,
        std: Vec<Monomial>,
        reducers: Vec<Polynomial>,
    ) -> QuotientAlgebra {
        let std_index = std
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        QuotientAlgebra {
            field,
            arity,
            std,
            std_index,
            reducers,
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.std.len()
    }

    /// Standard monomials, ascending grlex.
    pub fn std(&self) -> &[Monomial] {
        &self.std
    }

    pub fn std_index(&self, m: &Monomial) -> Option<usize> {
        self.std_index.get(m).copied()
    }

    pub fn reducers(&self) -> &[Polynomial] {
        &self.reducers
    }

    /// Leading monomials of the reducers: the minimal generators of the
    /// initial ideal.
    pub fn initial_generators(&self) -> Vec<Monomial> {
        self.reducers
            .iter()
            .map(|r| r.leading().expect("reducer is nonzero").0.clone())
            .collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.reducers.iter().all(|r| r.terms().len() == 1)
    }

    /// Fully reduce modulo the reducers; result is supported on std.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch(f.arity(), self.arity));
        }
        if **f.field() != *self.field {
            return Err(Error::FieldMismatch);
        }
        let fld = &self.field;
        let mut work: BTreeMap<Monomial, Repr> = BTreeMap::new();
        for (m, c) in f.terms() {
            work.insert(m.clone(), c.clone());
        }
        let mut out: Vec<(Monomial, Repr)> = Vec::new();
        while let Some((m, c)) = work.pop_last() {
            if fld.is_zero(&c) {
                continue;
            }
            if self.std_index.contains_key(&m) {
                out.push((m, c));
                continue;
            }
            let red = self
                .reducers
                .iter()
                .find(|r| r.leading().unwrap().0.divides(&m))
                .unwrap_or_else(|| panic!("no reducer divides {m}: inconsistent algebra"));
            let (lead_m, lead_c) = red.leading().unwrap();
            let shift = lead_m.quotient_into(&m);
            let scale = fld.div(&c, lead_c).expect("leading coefficient nonzero");
            // subtract scale * x^shift * red; the lead cancels m exactly
            for (rm, rc) in red.terms() {
                let tm = rm.mul(&shift);
                let tc = fld.mul(&scale, rc);
                if tm == m {
                    continue; // cancelled head
                }
                match work.get_mut(&tm) {
                    Some(old) => {
                        *old = fld.sub(old, &tc);
                        if fld.is_zero(old) {
                            work.remove(&tm);
                        }
                    }
                    None => {
                        work.insert(tm, fld.neg(&tc));
                    }
                }
            }
        }
        Ok(Polynomial::from_terms(self.field.clone(), self.arity, out))
    }

    /// Normal form expanded as a coefficient vector on the std basis.
    pub fn nf_coeffs(&self, f: &Polynomial) -> Result<Vec<Repr>> {
        let nf = self.normal_form(f)?;
        let mut v = vec![self.field.zero(); self.std.len()];
        for (m, c) in nf.terms() {
            let i = *self
                .std_index
                .get(m)
                .expect("normal form supported on std");
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// dim of F[x]/(I + <gens>) inside this algebra: |std| minus the rank of
    /// the span of all normal forms g*m for g in gens and m in std.
    pub fn quotient_dim(&self, gens: &[Polynomial]) -> Result<usize> {
        let mut ech = Echelon::new(self.field.clone(), self.std.len());
        for g in gens {
            for m in &self.std {
                let gm = g.mul_monomial(m);
                let v = self.nf_coeffs(&gm)?;
                ech.insert(v);
            }
        }
        Ok(self.std.len() - ech.rank())
    }

    /// Same std, reducers replaced by their bare leading monomials.
    pub fn initial_algebra(&self) -> QuotientAlgebra {
        let reducers = self
            .reducers
            .iter()
            .map(|r| {
                let (m, _) = r.leading().unwrap();
                Polynomial::monomial(self.field.clone(), m.clone(), self.field.one())
            })
            .collect();
        QuotientAlgebra::new(
            self.field.clone(),
            self.arity,
            self.std.clone(),
            reducers,
        )
    }

    /// Same std, reducers replaced by their top-degree parts. Valid because
    /// grlex is degree-compatible: in(hd(g)) = in(g), and the surviving tail
    /// monomials were already standard.
    pub fn hd_algebra(&self) -> QuotientAlgebra {
        let reducers = self.reducers.iter().map(|r| r.hd()).collect();
        QuotientAlgebra::new(
            self.field.clone(),
            self.arity,
            self.std.clone(),
            reducers,
        )
    }

    /// Same presentation with coefficients embedded into a degree-t tower
    /// extension of the coefficient field.
    pub fn extend_scalars(&self, t: usize) -> Result<QuotientAlgebra> {
        let target = FieldSpec::extend(&self.field, t)?;
        self.extend_scalars_to(&target)
    }

    pub fn extend_scalars_to(&self, target: &Arc<FieldSpec>) -> Result<QuotientAlgebra> {
        let reducers = self
            .reducers
            .iter()
            .map(|r| r.extend_scalars(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotientAlgebra::new(
            target.clone(),
            self.arity,
            self.std.clone(),
            reducers,
        ))
    }

    /// JSON schema: {"field", "n", "std": [[e...]...], "reducers": [text...]}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.notation(),
            "n": self.arity,
            "std": self.std.iter().map(|m| m.0.clone()).collect::<Vec<_>>(),
            "reducers": self.reducers.iter().map(|r| r.to_text()).collect::<Vec<_>>(),
        })
    }
}

/// Number of Hasse-derivative indices of weight < l in n variables.
pub fn functional_count(arity: usize, l: u32) -> u128 {
    // sum_{w<l} C(w+n-1, n-1) = C(l+n-1, n)
    binom((l as u64) + (arity as u64) - 1, arity as u64)
}

/// The algebra F[x]/I_l(S) where I_l(S) is the ideal of polynomials vanishing
/// on every point of S with multiplicity at least l. Computed by a dual
/// Buchberger-Moller sweep against the weight-< l Hasse evaluation
/// functionals.
pub fn vanishing_algebra(s: &PointSet, l: u32) -> Result<QuotientAlgebra> {
    if l == 0 {
        return Err(Error::InvalidParam("multiplicity l must be >= 1".into()));
    }
    let n = s.arity();
    let field = s.field().clone();
    let target = (s.len() as u128) * functional_count(n, l);
    check_guard(target, 5000, "vanishing ideal dimension |S|*C(l+n-1,n)")?;
    let target = target as usize;

    let hasse_indices: Vec<Monomial> = (0..l)
        .flat_map(|w| monomials_of_degree(n, w))
        .collect();
    let width = s.len() * hasse_indices.len();
    let p = field.characteristic();

    // evaluation vector of a monomial against every (point, index) functional
    let eval_vec = |m: &Monomial| -> Vec<Repr> {
        let mut v = Vec::with_capacity(width);
        for pt in s.points() {
            for idx in &hasse_indices {
                let entry = match m.checked_sub(idx) {
                    None => field.zero(),
                    Some(shifted) => {
                        let mut coef = 1u64;
                        for (a, b) in m.0.iter().zip(&idx.0) {
                            coef = (coef * crate::util::binom_mod_p(*a as u64, *b as u64, p)) % p;
                            if coef == 0 {
                                break;
                            }
                        }
                        if coef == 0 {
                            field.zero()
                        } else {
                            let mut t = field.from_u64(coef);
                            for (i, e) in shifted.0.iter().enumerate() {
                                if *e > 0 {
                                    t = field.mul(&t, &field.pow(&pt[i], *e as u128));
                                }
                            }
                            t
                        }
                    }
                };
                v.push(entry);
            }
        }
        v
    };

    let mut ech = TrackedEchelon::new(field.clone(), width);
    let mut std: Vec<Monomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut reducers: Vec<Polynomial> = Vec::new();
    let mut queue: BTreeSet<Monomial> = BTreeSet::new();
    queue.insert(Monomial::one(n));
    while let Some(cand) = queue.pop_first() {
        if leads.iter().any(|g| g.divides(&cand)) {
            continue;
        }
        match ech.insert(eval_vec(&cand)) {
            Tracked::Independent => {
                for i in 0..n {
                    queue.insert(cand.mul(&Monomial::var(n, i)));
                }
                std.push(cand);
            }
            Tracked::Dependent(coeffs) => {
                let mut terms = vec![(cand.clone(), field.one())];
                for (j, c) in coeffs.iter().enumerate() {
                    if !field.is_zero(c) {
                        terms.push((std[j].clone(), field.neg(c)));
                    }
                }
                reducers.push(Polynomial::from_terms(field.clone(), n, terms));
                leads.push(cand);
            }
        }
    }
    debug_assert_eq!(std.len(), target);
    Ok(QuotientAlgebra::new(field, n, std, reducers))
}

/// Degree-truncated quotient by a homogeneous ideal: echelonize each graded
/// piece I_d (spanned by generator times complementary-degree monomial) until
/// the first degree at which I_d is the whole degree-d space; errors with
/// StabilizationCap if that never happens below the cap.
pub fn truncated_homogeneous_algebra(
    gens: &[Polynomial],
    cap: u32,
) -> Result<QuotientAlgebra> {
    let first = gens
        .iter()
        .find(|g| !g.is_zero())
        .ok_or(Error::StabilizationCap(cap))?;
    let field = first.field().clone();
    let n = first.arity();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if !g.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        if g.arity() != n {
            return Err(Error::ArityMismatch(g.arity(), n));
        }
        if *g.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    let gens: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();

    let mut std: Vec<Monomial> = Vec::new();
    let mut reducers: Vec<Polynomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut stabilized = false;
    for d in 0..=cap {
        // columns: degree-d monomials, descending grlex
        let mut cols = monomials_of_degree(n, d);
        cols.reverse();
        let col_index: HashMap<&Monomial, usize> =
            cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<Repr>> = Vec::new();
        for g in &gens {
            let gd = g.degree().unwrap();
            if gd > d {
                continue;
            }
            for m in monomials_of_degree(n, d - gd) {
                let gm = g.mul_monomial(&m);
                let mut row = vec![field.zero(); cols.len()];
                for (mm, c) in gm.terms() {
                    row[col_index[mm]] = c.clone();
                }
                rows.push(row);
            }
        }
        let r = rref(&field, rows);
        let pivot_cols: BTreeSet<usize> = r.iter().map(|(p, _)| *p).collect();
        for (p, row) in &r {
            let lead = cols[*p].clone();
            if leads.iter().any(|g| g.divides(&lead)) {
                continue;
            }
            let mut terms = vec![(lead.clone(), field.one())];
            for (j, c) in row.iter().enumerate() {
                if j != *p && !field.is_zero(c) {
                    terms.push((cols[j].clone(), c.clone()));
                }
            }
            reducers.push(Polynomial::from_terms(field.clone(), n, terms));
            leads.push(lead);
        }
        let mut new_std: Vec<Monomial> = cols
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivot_cols.contains(i))
            .map(|(_, m)| m.clone())
            .collect();
        if new_std.is_empty() {
            stabilized = true;
            break;
        }
        new_std.sort();
        std.extend(new_std);
    }
    if !stabilized {
        return Err(Error::StabilizationCap(cap));
    }
    reducers.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    Ok(QuotientAlgebra::new(field, n, std, reducers))
}

pub const DEFAULT_STABILIZATION_CAP: u32 = 64;

/// Pairwise products of two generating sets, pruned of zeros and duplicates
/// (up to a scalar).
pub fn ideal_product(a: &[Polynomial], b: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut out: Vec<Polynomial> = Vec::new();
    for g in a {
        for h in b {
            let p = g.mul(h)?;
            if p.is_zero() {
                continue;
            }
            let pm = p.monic();
            if out.iter().all(|q| q.monic() != pm) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// All of F^n as a point set.
pub fn full_grid(field: &Arc<FieldSpec>, n: usize) -> Result<PointSet> {
    let q = field.cardinality();
    let total = q.checked_pow(n as u32).ok_or(Error::FieldTooLarge)?;
    check_guard(total, 1 << 20, "full grid size q^n")?;
    let mut pts = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut p = Vec::with_capacity(n);
        for _ in 0..n {
            p.push(field.from_index(idx % q)?);
            idx /= q;
        }
        pts.push(p);
    }
    PointSet::new(field.clone(), n, pts)
}

/// Monomials of degree <= d outside the given leading terms, for tests.
pub fn standard_complement(leads: &[Monomial], arity: usize, through_degree: u32) -> Vec<Monomial> {
    monomials_up_to_degree(arity, through_degree)
        .into_iter()
        .filter(|m| !leads.iter().any(|g| g.divides(m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly_from_indices, Multiplicity};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    fn random_points<R: Rng>(
        field: &Arc<FieldSpec>,
        n: usize,
        count: usize,
        rng: &mut R,
    ) -> PointSet {
        let q = field.cardinality();
        let total = q.pow(n as u32);
        assert!(count as u128 <= total);
        let mut chosen = BTreeSet::new();
        while chosen.len() < count {
            chosen.insert(rng.gen_range(0..total));
        }
        let pts: Vec<Vec<u128>> = chosen
            .iter()
            .map(|idx| {
                let mut idx = *idx;
                let mut p = Vec::with_capacity(n);
                for _ in 0..n {
                    p.push(idx % q);
                    idx /= q;
                }
                p
            })
            .collect();
        PointSet::from_indices(field.clone(), n, &pts).unwrap()
    }

    #[test]
    fn point_set_validation() {
        let f2 = f(2);
        assert!(matches!(
            PointSet::new(f2.clone(), 2, vec![]),
            Err(Error::EmptyPointSet)
        ));
        let dup = PointSet::from_indices(f2.clone(), 2, &[vec![0, 1], vec![0, 1]]);
        assert!(matches!(dup, Err(Error::DuplicatePoint(1))));
        let bad = PointSet::from_indices(f2, 2, &[vec![0, 2]]);
        assert!(bad.is_err());
    }

    #[test]
    fn point_set_json_round_trip() {
        let f4 = FieldSpec::make(2, 2).unwrap();
        let s = PointSet::from_indices(f4, 2, &[vec![0, 1], vec![2, 3]]).unwrap();
        let j = s.to_json();
        let t = PointSet::from_json(&j).unwrap();
        assert_eq!(t.to_json(), j);
    }

    #[test]
    fn vanishing_algebra_simple_interpolation() {
        // three points in F_5^2, l = 1: dim 3 and reducers vanish on S
        let f5 = f(5);
        let s = PointSet::from_indices(f5.clone(), 2, &[vec![0, 0], vec![1, 2], vec![3, 4]])
            .unwrap();
        let alg = vanishing_algebra(&s, 1).unwrap();
        assert_eq!(alg.dim(), 3);
        for r in alg.reducers() {
            for pt in s.points() {
                assert!(f5.is_zero(&r.eval(pt).unwrap()));
            }
        }
    }

    #[test]
    fn vanishing_algebra_respects_multiplicity() {
        let f3 = f(3);
        let s = PointSet::from_indices(f3.clone(), 2, &[vec![0, 0], vec![1, 1]]).unwrap();
        for l in 1..=3u32 {
            let alg = vanishing_algebra(&s, l).unwrap();
            assert_eq!(alg.dim() as u128, 2 * functional_count(2, l));
            for r in alg.reducers() {
                for pt in s.points() {
                    match r.multiplicity(pt).unwrap() {
                        Multiplicity::Finite(m) => assert!(m >= l, "mult {m} < {l}"),
                        Multiplicity::Infinite => {}
                    }
                }
            }
        }
    }

    #[test]
    fn std_is_downward_closed_and_reducer_tails_standard() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f3 = f(3);
            let s = random_points(&f3, 2, 5, &mut rng);
            let alg = vanishing_algebra(&s, 2).unwrap();
            let stds: BTreeSet<&Monomial> = alg.std().iter().collect();
            for m in alg.std() {
                for i in 0..2 {
                    if let Some(div) = m.checked_sub(&Monomial::var(2, i)) {
                        assert!(stds.contains(&div), "std not downward closed");
                    }
                }
            }
            for r in alg.reducers() {
                let (lead, _) = r.leading().unwrap();
                assert!(!stds.contains(lead));
                for (m, _) in &r.terms()[1..] {
                    assert!(stds.contains(m), "reducer tail off std");
                }
            }
            // leads pairwise non-dividing: minimal generators
            let leads = alg.initial_generators();
            for a in &leads {
                for b in &leads {
                    if a != b {
                        assert!(!a.divides(b));
                    }
                }
            }
        }
    }

    #[test]
    fn normal_form_is_linear_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f5 = f(5);
        let s = random_points(&f5, 2, 6, &mut rng);
        let alg = vanishing_algebra(&s, 1).unwrap();
        for _ in 0..20 {
            let mut terms = Vec::new();
            for m in monomials_up_to_degree(2, 4) {
                if rng.gen_bool(0.4) {
                    terms.push((m, f5.random(&mut rng)));
                }
            }
            let a = Polynomial::from_terms(f5.clone(), 2, terms.clone());
            let b = Polynomial::from_terms(
                f5.clone(),
                2,
                terms.iter().map(|(m, _)| (m.clone(), f5.random(&mut rng))).collect(),
            );
            let nf_a = alg.normal_form(&a).unwrap();
            let nf_b = alg.normal_form(&b).unwrap();
            assert_eq!(alg.normal_form(&nf_a).unwrap(), nf_a);
            let sum_nf = alg.normal_form(&a.add(&b).unwrap()).unwrap();
            assert_eq!(sum_nf, nf_a.add(&nf_b).unwrap());
            // normal form preserves evaluation on S
            for pt in s.points() {
                assert_eq!(a.eval(pt).unwrap(), nf_a.eval(pt).unwrap());
            }
        }
    }

    #[test]
    fn quotient_dim_counts_cut_points() {
        // S = three points on the line x2 = 0 plus one off it, J = <x2>
        let f5 = f(5);
        let s = PointSet::from_indices(
            f5.clone(),
            2,
            &[vec![0, 0], vec![1, 0], vec![2, 0], vec![1, 1]],
        )
        .unwrap();
        let alg = vanishing_algebra(&s, 1).unwrap();
        let j = vec![Polynomial::variable(f5.clone(), 2, 1)];
        assert_eq!(alg.quotient_dim(&j).unwrap(), 3);
    }

    #[test]
    fn truncated_homogeneous_power_ideal() {
        // <x1, x2>^d has quotient dimension C(d+n-1, n) for n = 2
        let f2 = f(2);
        for d in 1..=4u32 {
            let gens: Vec<Polynomial> = monomials_of_degree(2, d)
                .into_iter()
                .map(|m| Polynomial::monomial(f2.clone(), m, f2.one()))
                .collect();
            let alg = truncated_homogeneous_algebra(&gens, 16).unwrap();
            assert_eq!(alg.dim() as u128, binom(d as u64 + 1, 2));
            assert!(alg.is_monomial());
        }
    }

    #[test]
    fn truncated_rejects_inhomogeneous_and_caps() {
        let f2 = f(2);
        let bad = poly_from_indices(&f2, 2, &[(&[1, 0], 1), (&[0, 0], 1)]).unwrap();
        assert!(matches!(
            truncated_homogeneous_algebra(&[bad], 8),
            Err(Error::NonHomogeneous)
        ));
        // <x1> in two variables is not zero-dimensional
        let x1 = Polynomial::variable(f2.clone(), 2, 0);
        assert!(matches!(
            truncated_homogeneous_algebra(&[x1], 8),
            Err(Error::StabilizationCap(8))
        ));
    }

    #[test]
    fn truncated_agrees_with_vanishing_hd() {
        // hd of a vanishing algebra's reducers generates an ideal whose
        // truncated quotient has the same dimension
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let f3 = f(3);
            let s = random_points(&f3, 2, 4, &mut rng);
            let alg = vanishing_algebra(&s, 1).unwrap();
            let gens: Vec<Polynomial> = alg.reducers().iter().map(|r| r.hd()).collect();
            let t = truncated_homogeneous_algebra(&gens, 32).unwrap();
            assert_eq!(t.dim(), alg.dim());
            assert_eq!(t.std(), alg.std());
        }
    }

    #[test]
    fn initial_and_hd_preserve_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f5 = f(5);
        let s = random_points(&f5, 3, 6, &mut rng);
        let alg = vanishing_algebra(&s, 1).unwrap();
        let ini = alg.initial_algebra();
        let hd = alg.hd_algebra();
        assert_eq!(ini.dim(), alg.dim());
        assert_eq!(hd.dim(), alg.dim());
        assert!(ini.is_monomial());
        assert_eq!(
            hd.initial_algebra().initial_generators(),
            alg.initial_generators()
        );
    }

    #[test]
    fn extend_scalars_identity_and_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f2 = f(2);
        let s = random_points(&f2, 2, 3, &mut rng);
        let alg = vanishing_algebra(&s, 1).unwrap();
        let same = alg.extend_scalars(1).unwrap();
        assert_eq!(same.dim(), alg.dim());
        assert_eq!(*same.field(), *alg.field());
        let ext = alg.extend_scalars(3).unwrap();
        assert_eq!(ext.dim(), alg.dim());
        assert_eq!(ext.field().cardinality(), 8);
    }

    #[test]
    fn guard_rejects_oversized_instances() {
        let f2 = f(2);
        let s = full_grid(&f2, 3).unwrap();
        // 8 * C(24+3-1, 3) far exceeds 5000
        assert!(matches!(
            vanishing_algebra(&s, 24),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn ideal_product_prunes() {
        let f2 = f(2);
        let x1 = Polynomial::variable(f2.clone(), 2, 0);
        let x2 = Polynomial::variable(f2.clone(), 2, 1);
        let prod = ideal_product(&[x1.clone(), x2.clone()], &[x1.clone(), x2.clone()]).unwrap();
        assert_eq!(prod.len(), 3); // x1^2, x1*x2, x2^2
    }
}
