//! Multiplication matrices of zero-dimensional quotients: the D x D matrix
//! T_h whose entries are linear forms in the hyperplane coefficients h,
//! specializing to multiplication by h.x on the standard basis. Rank drops
//! of T_h at h certify richness of the hyperplane h.x = 0; generic-rank
//! sampling over a large extension decides whether the rank-drop variety is
//! all of space.

use crate::algebra::QuotientAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Repr};
use crate::linalg::rank_of;
use crate::poly::{linear_form, Monomial, Multiplicity, Polynomial};
use rand::Rng;
use std::sync::Arc;

/// T_h for a quotient algebra: entry (row, col) is the linear form
/// sum_i entries[row][col][i] h_i, the coefficient of std[row] in the normal
/// form of x_i * std[col].
#[derive(Clone, Debug)]
pub struct MultiplicationMatrix {
    field: Arc<FieldSpec>,
    arity: usize,
    dim: usize,
    entries: Vec<Vec<Vec<Repr>>>,
}

impl MultiplicationMatrix {
    pub fn build(alg: &QuotientAlgebra) -> Result<MultiplicationMatrix> {
        let field = alg.field().clone();
        let n = alg.arity();
        let dim = alg.dim();
        let mut entries = vec![vec![vec![field.zero(); n]; dim]; dim];
        for (col, m) in alg.std().iter().enumerate() {
            for i in 0..n {
                let xm = Polynomial::monomial(
                    field.clone(),
                    m.mul(&Monomial::var(n, i)),
                    field.one(),
                );
                let v = alg.nf_coeffs(&xm)?;
                for (row, c) in v.into_iter().enumerate() {
                    entries[row][col][i] = c;
                }
            }
        }
        Ok(MultiplicationMatrix {
            field,
            arity: n,
            dim,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Specialize the entries at h, over the base field or a tower above it.
    pub fn specialize(&self, ext: &Arc<FieldSpec>, h: &[Repr]) -> Result<Vec<Vec<Repr>>> {
        if h.len() != self.arity {
            return Err(Error::ArityMismatch(h.len(), self.arity));
        }
        let mut out = vec![vec![ext.zero(); self.dim]; self.dim];
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = ext.zero();
                for i in 0..self.arity {
                    let e = &self.entries[r][c][i];
                    if self.field.is_zero(e) {
                        continue;
                    }
                    let e = ext.embed_from(&self.field, e)?;
                    acc = ext.add(&acc, &ext.mul(&e, &h[i]));
                }
                out[r][c] = acc;
            }
        }
        Ok(out)
    }

    /// Exact rank of T_h at h over the base field.
    pub fn rank_at(&self, h: &[Repr]) -> Result<usize> {
        let m = self.specialize(&self.field, h)?;
        Ok(rank_of(&self.field, &m))
    }

    pub fn rank_at_ext(&self, ext: &Arc<FieldSpec>, h: &[Repr]) -> Result<usize> {
        let m = self.specialize(ext, h)?;
        Ok(rank_of(ext, &m))
    }

    /// Entry (row, col) as a degree-<=1 polynomial in the h variables.
    pub fn entry_poly(&self, row: usize, col: usize) -> Polynomial {
        linear_form(&self.field, &self.entries[row][col])
    }

    /// Exact minor of the rows/cols as a polynomial in h by cofactor
    /// expansion; only for sizes <= 6.
    pub fn symbolic_minor(&self, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidParam("minor must be square".into()));
        }
        if rows.len() > 6 {
            return Err(Error::GuardExceeded(
                "symbolic minors limited to size 6".into(),
            ));
        }
        self.minor_rec(rows, cols)
    }

    fn minor_rec(&self, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
        let f = &self.field;
        if rows.is_empty() {
            return Ok(Polynomial::constant(f.clone(), self.arity, f.one()));
        }
        let mut acc = Polynomial::zero(f.clone(), self.arity);
        let rest_rows = &rows[1..];
        for (k, c) in cols.iter().enumerate() {
            let entry = self.entry_poly(rows[0], *c);
            if entry.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, x)| *x)
                .collect();
            let sub = self.minor_rec(rest_rows, &rest_cols)?;
            let term = entry.mul(&sub)?;
            if k % 2 == 0 {
                acc = acc.add(&term)?;
            } else {
                acc = acc.sub(&term)?;
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub enum JmVerdict {
    /// No sampled h reached rank dim - m + 1; one-sided error at most
    /// (threshold / |E|)^samples for a fixed nonzero minor.
    Zero,
    /// Witness h over the sampling extension with rank >= dim - m + 1.
    Nonzero { witness: Vec<Repr> },
}

#[derive(Clone, Debug)]
pub struct JmReport {
    pub dim: usize,
    pub m: usize,
    pub threshold: usize,
    pub max_rank: usize,
    pub samples: usize,
    pub extension_degree: usize,
    pub extension_cardinality: u128,
    pub error_bound: f64,
    pub verdict: JmVerdict,
}

pub const JM_MIN_CARD_FACTOR: u128 = 1 << 16;

/// Decide whether every (dim - m + 1)-minor of T_h vanishes identically,
/// i.e. whether every hyperplane over every extension is (m)-rich. Samples
/// `samples` random h over a degree-t extension; `t = 0` picks the least t
/// with q^t >= 2^16 * dim.
pub fn jm_is_zero<R: Rng + ?Sized>(
    alg: &QuotientAlgebra,
    m: usize,
    t: usize,
    samples: usize,
    rng: &mut R,
) -> Result<JmReport> {
    let mx = MultiplicationMatrix::build(alg)?;
    jm_is_zero_on(&mx, m, t, samples, rng)
}

pub fn jm_is_zero_on<R: Rng + ?Sized>(
    mx: &MultiplicationMatrix,
    m: usize,
    t: usize,
    samples: usize,
    rng: &mut R,
) -> Result<JmReport> {
    let dim = mx.dim();
    if m == 0 || m > dim {
        return Err(Error::InvalidParam(format!(
            "need 1 <= m <= dim = {dim}, got m = {m}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidParam("need at least one sample".into()));
    }
    let threshold = dim - m + 1;
    let field = mx.field();
    let t = if t == 0 {
        let floor = JM_MIN_CARD_FACTOR * dim as u128;
        let mut tt = 1usize;
        let mut card = field.cardinality();
        while card < floor {
            card = card
                .checked_mul(field.cardinality())
                .ok_or(Error::FieldTooLarge)?;
            tt += 1;
        }
        tt
    } else {
        t
    };
    let ext = FieldSpec::extend(field, t)?;
    let mut max_rank = 0usize;
    let mut witness: Option<Vec<Repr>> = None;
    for _ in 0..samples {
        let h: Vec<Repr> = (0..mx.arity()).map(|_| ext.random(rng)).collect();
        let r = mx.rank_at_ext(&ext, &h)?;
        if r > max_rank {
            max_rank = r;
        }
        if r >= threshold {
            witness = Some(h);
            break;
        }
    }
    let per_trial = threshold as f64 / ext.cardinality() as f64;
    let error_bound = per_trial.powi(samples as i32);
    Ok(JmReport {
        dim,
        m,
        threshold,
        max_rank,
        samples,
        extension_degree: t,
        extension_cardinality: ext.cardinality(),
        error_bound,
        verdict: match witness {
            Some(w) => JmVerdict::Nonzero { witness: w },
            None => JmVerdict::Zero,
        },
    })
}

/// max(0, (dim - l + 1) - rank(T_h at h)): a lower bound on the multiplicity
/// forced at h by the rank drop, given a degree budget of l.
pub fn minor_mult_lower_bound(
    mx: &MultiplicationMatrix,
    l: usize,
    h: &[Repr],
) -> Result<usize> {
    let dim = mx.dim();
    let rank = mx.rank_at(h)?;
    Ok((dim + 1).saturating_sub(l).saturating_sub(rank))
}

#[derive(Clone, Debug)]
pub struct SzReport {
    pub degree: u64,
    pub grid: usize,
    pub arity: usize,
    pub mult_sum: u64,
    pub bound: u64,
    pub holds: bool,
}

/// Multiplicity-counting Schwartz-Zippel check: for nonzero f of degree <= d,
/// sum of multiplicities over U^n is at most d |U|^(n-1).
pub fn sz_mult_verify(f: &Polynomial, u: &[Repr], d: u64) -> Result<SzReport> {
    if f.is_zero() {
        return Err(Error::InvalidParam("need a nonzero polynomial".into()));
    }
    let deg = f.degree().unwrap() as u64;
    if deg > d {
        return Err(Error::InvalidParam(format!(
            "degree {deg} exceeds the budget {d}"
        )));
    }
    let n = f.arity();
    let field = f.field();
    let mut mult_sum = 0u64;
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<Repr> = idx.iter().map(|i| u[*i].clone()).collect();
        match f.multiplicity(&point)? {
            Multiplicity::Finite(m) => mult_sum += m as u64,
            Multiplicity::Infinite => unreachable!("nonzero polynomial"),
        }
        let mut carry = 0;
        loop {
            if carry == n {
                let bound = d * (u.len() as u64).pow(n as u32 - 1);
                let _ = field;
                return Ok(SzReport {
                    degree: deg,
                    grid: u.len(),
                    arity: n,
                    mult_sum,
                    bound,
                    holds: mult_sum <= bound,
                });
            }
            idx[carry] += 1;
            if idx[carry] == u.len() {
                idx[carry] = 0;
                carry += 1;
            } else {
                break;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct NonzeroCaseReport {
    pub dim: usize,
    pub m: usize,
    pub l: usize,
    pub q: u128,
    pub hyperplanes: usize,
    /// (hyperplane coefficients, dim - rank) for every rational hyperplane.
    pub richness: Vec<(Vec<u128>, usize)>,
    pub all_rich: bool,
    pub jm_nonzero: bool,
    pub rhs: i128,
    pub holds: bool,
}

/// Representatives of the rational hyperplanes through the origin: nonzero
/// h in F^n with first nonzero coordinate 1.
pub fn projective_hyperplanes(field: &Arc<FieldSpec>, n: usize) -> Result<Vec<Vec<Repr>>> {
    let q = field.cardinality();
    let total = q.checked_pow(n as u32).ok_or(Error::FieldTooLarge)?;
    crate::util::check_guard(total, 1 << 22, "hyperplane enumeration q^n")?;
    let mut out = Vec::new();
    for mut idx in 1..total {
        let mut h = Vec::with_capacity(n);
        for _ in 0..n {
            h.push(field.from_index(idx % q)?);
            idx /= q;
        }
        let first = h.iter().find(|c| !field.is_zero(c)).unwrap();
        if *first == field.one() {
            out.push(h);
        }
    }
    Ok(out)
}

/// When every rational hyperplane is (m)-rich for the quotient but the
/// generic rank still reaches dim - l + 1 (the rank-drop variety is not all
/// of space), the quotient dimension is forced to be at least
/// q m (1 - (l-1)/m) = q(m - l + 1).
pub fn theorem_nonzero_case_check<R: Rng + ?Sized>(
    alg: &QuotientAlgebra,
    m: usize,
    l: usize,
    t: usize,
    samples: usize,
    rng: &mut R,
) -> Result<NonzeroCaseReport> {
    if l < 1 || l > m {
        return Err(Error::InvalidParam("need 1 <= l <= m".into()));
    }
    let mx = MultiplicationMatrix::build(alg)?;
    let field = alg.field();
    let q = field.cardinality();
    let dim = alg.dim();
    let hyper = projective_hyperplanes(field, alg.arity())?;
    let mut richness = Vec::with_capacity(hyper.len());
    let mut all_rich = true;
    for h in &hyper {
        let rank = mx.rank_at(h)?;
        if dim - rank < m {
            all_rich = false;
        }
        richness.push((h.iter().map(|c| field.index_of(c)).collect(), dim - rank));
    }
    let jm = jm_is_zero_on(&mx, l, t, samples, rng)?;
    let jm_nonzero = matches!(jm.verdict, JmVerdict::Nonzero { .. });
    let rhs = (q as i128) * (m as i128 - l as i128 + 1);
    let holds = !(all_rich && jm_nonzero) || (dim as i128) >= rhs;
    Ok(NonzeroCaseReport {
        dim,
        m,
        l,
        q,
        hyperplanes: hyper.len(),
        richness,
        all_rich,
        jm_nonzero,
        rhs,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{truncated_homogeneous_algebra, vanishing_algebra, PointSet};
    use crate::poly::monomials_of_degree;
    use crate::util::binom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    fn power_algebra(field: &Arc<FieldSpec>, n: usize, d: u32) -> QuotientAlgebra {
        let gens: Vec<Polynomial> = monomials_of_degree(n, d)
            .into_iter()
            .map(|m| Polynomial::monomial(field.clone(), m, field.one()))
            .collect();
        truncated_homogeneous_algebra(&gens, 16).unwrap()
    }

    #[test]
    fn entries_are_linear_in_h() {
        let alg = power_algebra(&f(3), 2, 3);
        let mx = MultiplicationMatrix::build(&alg).unwrap();
        for r in 0..mx.dim() {
            for c in 0..mx.dim() {
                let p = mx.entry_poly(r, c);
                assert!(p.degree().unwrap_or(1) <= 1);
                assert!(p.is_zero() || p.is_homogeneous());
            }
        }
    }

    #[test]
    fn specialization_matches_multiplication_operator() {
        // T_h at h equals the matrix of multiplication by h.x in the std basis
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f5 = f(5);
        let s = PointSet::from_indices(
            f5.clone(),
            2,
            &[vec![0, 0], vec![1, 2], vec![3, 1], vec![4, 4]],
        )
        .unwrap();
        let alg = vanishing_algebra(&s, 1).unwrap();
        let mx = MultiplicationMatrix::build(&alg).unwrap();
        for _ in 0..10 {
            let h: Vec<Repr> = (0..2).map(|_| f5.random(&mut rng)).collect();
            let spec = mx.specialize(&f5, &h).unwrap();
            let hx = linear_form(&f5, &h);
            for (col, m) in alg.std().iter().enumerate() {
                let prod = hx.mul_monomial(m);
                let v = alg.nf_coeffs(&prod).unwrap();
                for (row, c) in v.iter().enumerate() {
                    assert_eq!(spec[row][col], *c);
                }
            }
        }
    }

    #[test]
    fn symbolic_minor_agrees_with_rank() {
        let alg = power_algebra(&f(2), 2, 2);
        let mx = MultiplicationMatrix::build(&alg).unwrap();
        let dim = mx.dim();
        assert_eq!(dim, 3);
        // the determinant of the full matrix as a polynomial in h
        let rows: Vec<usize> = (0..dim).collect();
        let det = mx.symbolic_minor(&rows, &rows).unwrap();
        let f2 = f(2);
        for h0 in f2.elements() {
            for h1 in f2.elements() {
                let h = vec![h0.clone(), h1.clone()];
                let dv = det.eval(&h).unwrap();
                let full_rank = mx.rank_at(&h).unwrap() == dim;
                assert_eq!(!f2.is_zero(&dv), full_rank);
            }
        }
    }

    #[test]
    fn power_algebra_jm_threshold() {
        // multiplication by a generic h.x on F[x]/<x>^d drops rank by
        // exactly m* = C(d+n-2, n-1) (the top-degree piece is killed), so
        // every hyperplane is m*-rich and the rank-drop test says zero at
        // m*, while asking for m*+1 leaves a nonzero minor.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for (n, d) in [(2usize, 2u32), (2, 3), (3, 2)] {
            let alg = power_algebra(&f(2), n, d);
            let mstar = binom(d as u64 + n as u64 - 2, n as u64 - 1) as usize;
            let rep = jm_is_zero(&alg, mstar, 0, 3, &mut rng).unwrap();
            assert!(
                matches!(rep.verdict, JmVerdict::Zero),
                "n={n} d={d}: expected zero at m*={mstar}, max rank {}",
                rep.max_rank
            );
            assert!(rep.error_bound < 2f64.powi(-40));
            if mstar + 1 <= alg.dim() {
                let rep = jm_is_zero(&alg, mstar + 1, 0, 3, &mut rng).unwrap();
                assert!(
                    matches!(rep.verdict, JmVerdict::Nonzero { .. }),
                    "n={n} d={d}: expected nonzero at {}",
                    mstar + 1
                );
            }
        }
    }

    #[test]
    fn sz_exhaustive_small() {
        // every nonzero f over F_2 in 2 vars of degree <= 2
        let f2 = f(2);
        let u: Vec<Repr> = f2.elements().collect();
        let monos = crate::poly::monomials_up_to_degree(2, 2);
        for mask in 1u32..(1 << monos.len()) {
            let terms: Vec<(Monomial, Repr)> = monos
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, m)| (m.clone(), f2.one()))
                .collect();
            let p = Polynomial::from_terms(f2.clone(), 2, terms);
            let d = p.degree().unwrap() as u64;
            let rep = sz_mult_verify(&p, &u, d).unwrap();
            assert!(rep.holds, "violated for {p}: {rep:?}");
        }
    }

    #[test]
    fn minor_bound_is_consistent() {
        let alg = power_algebra(&f(2), 2, 3);
        let mx = MultiplicationMatrix::build(&alg).unwrap();
        let f2 = f(2);
        let h = vec![f2.one(), f2.one()];
        let rank = mx.rank_at(&h).unwrap();
        for l in 1..=3usize {
            let b = minor_mult_lower_bound(&mx, l, &h).unwrap();
            assert_eq!(b, (mx.dim() + 1).saturating_sub(l).saturating_sub(rank));
        }
    }
}
