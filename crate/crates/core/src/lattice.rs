//! Finite lattice sets of exponent vectors with the exchange property, the
//! staged PATH construction, and the closed-form lower bound |L| >=
//! D(n,m) m^(n/(n-1)) where m counts the points with last coordinate zero.

use crate::error::{Error, Result};
use crate::util::{binom, gen_binom};
use std::collections::BTreeSet;

/// A finite set of exponent vectors in N^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    arity: usize,
    points: BTreeSet<Vec<u32>>,
}

impl LatticeSet {
    pub fn new(arity: usize, points: Vec<Vec<u32>>) -> Result<LatticeSet> {
        for p in &points {
            if p.len() != arity {
                return Err(Error::ArityMismatch(p.len(), arity));
            }
        }
        Ok(LatticeSet {
            arity,
            points: points.into_iter().collect(),
        })
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

    pub fn contains(&self, p: &[u32]) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.points.iter()
    }

    /// Points whose last coordinate is zero, with that coordinate dropped.
    pub fn last_zero_slice(&self) -> Vec<Vec<u32>> {
        self.points
            .iter()
            .filter(|p| *p.last().unwrap() == 0)
            .map(|p| p[..p.len() - 1].to_vec())
            .collect()
    }

    /// Exchange property: for every lam in the set with lam_i = 0 and every
    /// j < i, all points lam + l(e_i - e_j) for 0 <= l <= lam_j stay in the
    /// set. Returns the first violation found.
    pub fn exchange_check(&self) -> Option<ExchangeWitness> {
        for lam in &self.points {
            for i in 0..self.arity {
                if lam[i] != 0 {
                    continue;
                }
                for j in 0..i {
                    for l in 0..=lam[j] {
                        let mut q = lam.clone();
                        q[i] += l;
                        q[j] -= l;
                        if !self.points.contains(&q) {
                            return Some(ExchangeWitness {
                                lambda: lam.clone(),
                                i,
                                j,
                                l,
                                missing: q,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.arity,
            "points": self.points.iter().cloned().collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LatticeSet> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("lattice: expected an object".into()))?;
        let n = obj
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("lattice: missing \"n\"".into()))? as usize;
        let pts = obj
            .get("points")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("lattice: missing \"points\"".into()))?;
        let mut rows = Vec::with_capacity(pts.len());
        for p in pts {
            let arr = p
                .as_array()
                .ok_or_else(|| Error::Parse("lattice: point is not an array".into()))?;
            let row = arr
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|x| x as u32)
                        .ok_or_else(|| Error::Parse("lattice: bad coordinate".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        LatticeSet::new(n, rows)
    }
}

#[derive(Clone, Debug)]
pub struct ExchangeWitness {
    pub lambda: Vec<u32>,
    pub i: usize,
    pub j: usize,
    pub l: u32,
    pub missing: Vec<u32>,
}

/// Staged path attached to a point lam in N^(n-1) (viewed inside N^n with
/// last coordinate zero). Stage i starts from
/// P_i = (lam_1, ..., lam_{n-i}, 0, lam_{n-i+1}, ..., lam_{n-1}) and moves
/// along e_{n-i+1} - e_{n-i}, contributing the points with step 0 < l <=
/// lam_{n-i}. The union has exactly wt(lam) points.
pub fn path_stages(lam: &[u32]) -> Result<Vec<Vec<Vec<u32>>>> {
    let n = lam.len() + 1;
    if n < 2 {
        return Err(Error::InvalidParam("path needs n >= 2".into()));
    }
    let mut stages = Vec::with_capacity(n - 1);
    for i in 1..n {
        // P_i: insert a zero after the first n-i coordinates of lam
        let split = n - i;
        let mut base: Vec<u32> = Vec::with_capacity(n);
        base.extend_from_slice(&lam[..split]);
        base.push(0);
        base.extend_from_slice(&lam[split..]);
        let mut stage = Vec::new();
        for l in 1..=lam[split - 1] {
            let mut p = base.clone();
            p[split] += l; // coordinate n-i+1 (1-based)
            p[split - 1] -= l; // coordinate n-i (1-based)
            stage.push(p);
        }
        stages.push(stage);
    }
    Ok(stages)
}

/// Union of the stages of PATH(lam), deduplicated.
pub fn path_points(lam: &[u32]) -> Result<BTreeSet<Vec<u32>>> {
    let mut out = BTreeSet::new();
    for stage in path_stages(lam)? {
        for p in stage {
            out.insert(p);
        }
    }
    Ok(out)
}

/// Largest number of distinct source points lam whose paths share a common
/// point, over the given slice.
pub fn path_multiplicity_audit(slice: &[Vec<u32>]) -> Result<usize> {
    use std::collections::BTreeMap;
    let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for lam in slice {
        for p in path_points(lam)? {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    Ok(counts.into_values().max().unwrap_or(0))
}

#[derive(Clone, Copy, Debug)]
pub struct DegreeSolve {
    /// Real solution of C(n-1+d, n-1) = m.
    pub d: f64,
    pub d_floor: u64,
    /// In [0, 1): m = C(n-1+d', n-1) + beta * C(n+d'-1, n-2).
    pub beta: f64,
}

pub const SOLVE_TOL: f64 = 1e-12;

/// Solve C(n-1+r, n-1) = m for real r >= 0 by bisection on [0, m].
pub fn solve_degree(n: usize, m: f64) -> Result<DegreeSolve> {
    if n < 2 {
        return Err(Error::InvalidParam("degree solve needs n >= 2".into()));
    }
    if !(m.is_finite() && m >= 1.0) {
        return Err(Error::InvalidParam("degree solve needs m >= 1".into()));
    }
    let a = (n - 1) as u64;
    let eval = |r: f64| gen_binom((n - 1) as f64 + r, a);
    let mut lo = 0.0f64;
    let mut hi = m;
    debug_assert!(eval(hi) >= m);
    for _ in 0..200 {
        if hi - lo < SOLVE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if eval(mid) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut d = 0.5 * (lo + hi);
    // snap to an integer when m is exactly a binomial, so that beta = 0
    let r = d.round();
    if r >= 0.0 && (eval(r) - m).abs() <= 1e-9 * m.max(1.0) {
        d = r;
    }
    let d_floor = d.floor() as u64;
    let lower = gen_binom((n - 1 + d_floor as usize) as f64, a);
    let step = gen_binom((n + d_floor as usize - 1) as f64, (n - 2) as u64);
    let beta = ((m - lower) / step).clamp(0.0, 1.0);
    Ok(DegreeSolve { d, d_floor, beta })
}

#[derive(Clone, Copy, Debug)]
pub struct DFormula {
    pub d: f64,
    pub d_floor: u64,
    pub beta: f64,
    /// Raw closed-form value (the exact quantity bounded by the staged-path
    /// count); 0 at m = 1.
    pub raw: f64,
    /// max(raw, 1/4): non-decreasing in m, >= 1/4 everywhere, and still a
    /// valid coefficient in |L| >= value * m^(n/(n-1)).
    pub value: f64,
}

/// The coefficient D(n, m) in the lattice lower bound.
pub fn d_formula(n: usize, m: f64) -> Result<DFormula> {
    let s = solve_degree(n, m)?;
    let dp = s.d_floor as f64;
    let nn = n as f64;
    let beta = s.beta;
    let lead = gen_binom(nn + dp - 1.0, (n - 1) as u64).powf(-1.0 / (nn - 1.0));
    let mid = (dp + beta * nn) / nn;
    let tail = ((dp + 1.0) / (dp + 1.0 + beta * (nn - 1.0))).powf(nn / (nn - 1.0));
    let raw = lead * mid * tail;
    Ok(DFormula {
        d: s.d,
        d_floor: s.d_floor,
        beta,
        raw,
        value: raw.max(0.25),
    })
}

/// Limit of D(n, m) as m grows: (n-1)!^(1/(n-1)) / n.
pub fn d_limit(n: usize) -> f64 {
    let mut fact = 1.0f64;
    for i in 2..n {
        fact *= i as f64;
    }
    fact.powf(1.0 / (n as f64 - 1.0)) / n as f64
}

#[derive(Clone, Debug)]
pub struct LatticeBoundReport {
    pub n: usize,
    pub total: usize,
    pub slice_size: usize,
    /// Union over the slice of the staged paths (all lie in the set when the
    /// exchange property holds).
    pub path_union: usize,
    /// (1/(n-1)) * sum of weights over the slice.
    pub weight_sum_scaled: f64,
    pub d_raw: f64,
    pub d_value: f64,
    pub closed_form: f64,
    pub holds: bool,
}

/// Check |L| >= D(n, m) m^(n/(n-1)) with m = |{lam in L : lam_n = 0}|, via
/// the staged-path count. Requires the exchange property.
pub fn lattice_lower_bound_check(lat: &LatticeSet) -> Result<LatticeBoundReport> {
    let n = lat.arity();
    if n < 2 {
        return Err(Error::InvalidParam("lattice bound needs n >= 2".into()));
    }
    if let Some(w) = lat.exchange_check() {
        return Err(Error::InvalidParam(format!(
            "exchange property fails at {:?} (i={}, j={}, l={}, missing {:?})",
            w.lambda, w.i, w.j, w.l, w.missing
        )));
    }
    let slice = lat.last_zero_slice();
    let m = slice.len();
    let mut union: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut wsum = 0u64;
    for lam in &slice {
        wsum += lam.iter().map(|x| *x as u64).sum::<u64>();
        for p in path_points(lam)? {
            debug_assert!(lat.contains(&p), "path escaped the exchange-closed set");
            union.insert(p);
        }
    }
    let weight_sum_scaled = wsum as f64 / (n as f64 - 1.0);
    let (d_raw, d_value, closed_form) = if m == 0 {
        (0.0, 0.0, 0.0)
    } else {
        let df = d_formula(n, m as f64)?;
        let cf = df.value * (m as f64).powf(n as f64 / (n as f64 - 1.0));
        (df.raw, df.value, cf)
    };
    let holds = (lat.len() as f64) + 1e-9 >= closed_form;
    Ok(LatticeBoundReport {
        n,
        total: lat.len(),
        slice_size: m,
        path_union: union.len(),
        weight_sum_scaled,
        d_raw,
        d_value,
        closed_form,
        holds,
    })
}

/// Coefficient F(n, m, q) of the homogeneous lower bound q^n * F:
/// F = (e (1 + m^(1/(n-1))/(e q))^(1/(n-1)) + m^(1/(n-1))/q)^(-1),
/// derived by optimizing the multiplicity parameter
/// l = m (1+f)^(1/(n-1)) / ((1+f)^(1/(n-1)) + f) with f = m^(1/(n-1))/(q e).
#[derive(Clone, Copy, Debug)]
pub struct FFormula {
    pub value: f64,
    pub f: f64,
    pub l: f64,
    /// Whether m >= (e^2 n)^n, the regime where the bound is proved.
    pub in_hypothesis: bool,
}

pub fn f_formula(n: usize, m: f64, q: f64) -> Result<FFormula> {
    if n < 2 || !(m >= 1.0) || !(q >= 2.0) {
        return Err(Error::InvalidParam(
            "f formula needs n >= 2, m >= 1, q >= 2".into(),
        ));
    }
    let e = std::f64::consts::E;
    let nn = n as f64;
    let root = m.powf(1.0 / (nn - 1.0));
    let f = root / (q * e);
    let value = 1.0 / (e * (1.0 + f).powf(1.0 / (nn - 1.0)) + root / q);
    let l = m * (1.0 + f).powf(1.0 / (nn - 1.0)) / ((1.0 + f).powf(1.0 / (nn - 1.0)) + f);
    let in_hypothesis = m >= (e * e * nn).powf(nn);
    Ok(FFormula {
        value,
        f,
        l,
        in_hypothesis,
    })
}

/// Exact count of standard monomials of a power ideal section, for oracles:
/// number of exponent vectors in N^(n-1) of weight <= d is C(n-1+d, n-1).
pub fn ball_size(n: usize, d: u64) -> u128 {
    binom((n as u64 - 1) + d, n as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(n: usize, d: u32) -> LatticeSet {
        // all exponent vectors of weight <= d: exchange-closed
        let pts = crate::poly::monomials_up_to_degree(n, d)
            .into_iter()
            .map(|m| m.0)
            .collect();
        LatticeSet::new(n, pts).unwrap()
    }

    #[test]
    fn exchange_property_examples() {
        let good = simplex(3, 3);
        assert!(good.exchange_check().is_none());
        // the exchange moves weight from a smaller index to a larger one:
        // (2,0) has its second coordinate zero, so (1,1) and (0,2) must stay
        let mut pts: Vec<Vec<u32>> = simplex(2, 2).iter().cloned().collect();
        pts.retain(|p| p != &vec![0, 2]);
        let bad = LatticeSet::new(2, pts).unwrap();
        let w = bad.exchange_check().unwrap();
        assert_eq!(w.missing, vec![0, 2]);
        assert_eq!(w.lambda, vec![2, 0]);
    }

    #[test]
    fn path_has_weight_many_points() {
        for lam in [vec![3u32, 2], vec![0, 5], vec![4, 0], vec![1, 2]] {
            let pts = path_points(&lam).unwrap();
            let wt: u32 = lam.iter().sum();
            assert_eq!(pts.len() as u32, wt, "lam = {lam:?}");
            // every path point has the same weight as lam and nonzero last
            // coordinate sum shifted; the base point itself is not included
            for p in &pts {
                assert_eq!(p.iter().sum::<u32>(), wt);
            }
        }
    }

    #[test]
    fn path_stage_shapes() {
        // n = 3, lam = (2, 1): stage 1 moves along e3 - e2, stage 2 along e2 - e1
        let stages = path_stages(&[2, 1]).unwrap();
        assert_eq!(stages.len(), 2);
        assert_eq!(stages[0], vec![vec![2, 0, 1]]);
        assert_eq!(stages[1], vec![vec![1, 1, 1], vec![0, 2, 1]]);
    }

    #[test]
    fn path_overlap_bounded_by_n_minus_one() {
        // over a whole simplex slice the audit must stay below n
        for n in [2usize, 3, 4] {
            let slice: Vec<Vec<u32>> = crate::poly::monomials_up_to_degree(n - 1, 4)
                .into_iter()
                .map(|m| m.0)
                .collect();
            let audit = path_multiplicity_audit(&slice).unwrap();
            assert!(audit <= n - 1, "n={n}: audit {audit}");
        }
    }

    #[test]
    fn solve_degree_pinned_example() {
        // n = 2, m = 5: C(1+d, 1) = 5 gives d = 4 exactly
        let s = solve_degree(2, 5.0).unwrap();
        assert_eq!(s.d, 4.0);
        assert_eq!(s.d_floor, 4);
        assert!(s.beta.abs() < 1e-9);
        // non-integer case: n = 3, m = 4 -> C(2+d,2) = 4
        let s = solve_degree(3, 4.0).unwrap();
        assert!((gen_binom(2.0 + s.d, 2) - 4.0).abs() < 1e-6);
        let lower = gen_binom(2.0 + s.d_floor as f64, 2);
        let step = gen_binom(2.0 + s.d_floor as f64, 1);
        assert!((lower + s.beta * step - 4.0).abs() < 1e-9);
    }

    #[test]
    fn d_formula_matches_hand_values() {
        // n = 2: raw D = d'/(2(d'+1)) at beta = 0; with m = d'+1
        for m in [1u64, 2, 5, 10, 100] {
            let df = d_formula(2, m as f64).unwrap();
            let dp = (m - 1) as f64;
            assert!((df.raw - dp / (2.0 * (dp + 1.0))).abs() < 1e-9, "m={m}");
        }
        // limit: n = 2 -> 1/2
        assert!((d_limit(2) - 0.5).abs() < 1e-12);
        let df = d_formula(2, 1e9).unwrap();
        assert!((df.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn lattice_bound_on_simplices() {
        for n in [2usize, 3] {
            for d in 1..=4u32 {
                let lat = simplex(n, d);
                let rep = lattice_lower_bound_check(&lat).unwrap();
                assert!(rep.holds, "n={n} d={d}: {rep:?}");
                // chain: |L| >= path-union-based weight sum
                assert!(lat.len() as f64 + 1e-9 >= rep.weight_sum_scaled);
                assert!(rep.path_union <= lat.len());
            }
        }
    }

    #[test]
    fn f_formula_sanity() {
        let r = f_formula(3, 1e6, 1e4).unwrap();
        assert!(r.value > 0.0 && r.value < 1.0 / std::f64::consts::E + 1e-9);
        assert!(r.l > 0.0 && r.l <= 1e6);
        // large q: F tends to 1/e
        let r = f_formula(3, 1e6, 1e12).unwrap();
        assert!((r.value - 1.0 / std::f64::consts::E).abs() < 1e-3);
    }

    #[test]
    fn lattice_json_round_trip() {
        let lat = simplex(2, 2);
        let j = lat.to_json();
        let back = LatticeSet::from_json(&j).unwrap();
        assert_eq!(back, lat);
    }
}
