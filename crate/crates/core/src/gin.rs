//! Generic initial ideals: sample random upper-triangular changes of
//! coordinates over a large tower extension, take the initial ideal of the
//! transformed homogeneous ideal, and keep the grlex-greatest observation.
//! Includes the exchange-stability certificate for monomial ideals under the
//! upper-triangular group and the standard-monomial lattice.

use crate::algebra::{truncated_homogeneous_algebra, QuotientAlgebra, DEFAULT_STABILIZATION_CAP};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::LatticeSet;
use crate::poly::{monomials_of_degree, BorelMatrix, Monomial, Polynomial};
use crate::util::binom_mod_p;
use rand::Rng;
use std::cmp::Ordering;
use std::sync::Arc;

/// A monomial ideal given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    arity: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(arity: usize, gens: Vec<Monomial>) -> MonomialIdeal {
        let mut minimal: Vec<Monomial> = Vec::new();
        let mut sorted = gens;
        sorted.sort();
        for g in sorted {
            if !minimal.iter().any(|m| m.divides(&g)) {
                minimal.push(g);
            }
        }
        MonomialIdeal {
            arity,
            gens: minimal,
        }
    }

    pub fn from_algebra(alg: &QuotientAlgebra) -> Result<MonomialIdeal> {
        if !alg.is_monomial() {
            // take the initial ideal instead of failing silently
            return Ok(MonomialIdeal::new(
                alg.arity(),
                alg.initial_generators(),
            ));
        }
        Ok(MonomialIdeal::new(alg.arity(), alg.initial_generators()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Minimal generators, ascending grlex.
    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn max_gen_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.weight()).max().unwrap_or(0)
    }

    /// Degree-d piece, descending grlex.
    pub fn degree_piece(&self, d: u32) -> Vec<Monomial> {
        let mut ms: Vec<Monomial> = monomials_of_degree(self.arity, d)
            .into_iter()
            .filter(|m| self.contains(m))
            .collect();
        ms.reverse();
        ms
    }

    /// Compare two monomial ideals degree by degree: each graded piece listed
    /// in descending grlex and the tuples compared lexicographically.
    pub fn cmp_graded(&self, other: &MonomialIdeal) -> Ordering {
        assert_eq!(self.arity, other.arity);
        let top = self.max_gen_degree().max(other.max_gen_degree());
        for d in 0..=top {
            let a = self.degree_piece(d);
            let b = other.degree_piece(d);
            // longer piece (more of the degree in the ideal) wins first;
            // then entrywise grlex
            match a.len().cmp(&b.len()) {
                Ordering::Equal => {}
                ord => return ord,
            }
            for (x, y) in a.iter().zip(&b) {
                match x.cmp(y) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }
}

/// Exchange-stability of a monomial ideal under the upper-triangular group:
/// for every generator x^lam, every i with lam_i > 0, every j < i, and every
/// 0 < l <= lam_i with C(lam_i, l) nonzero mod p, the exchanged monomial
/// x^(lam - l e_i + l e_j) must lie in the ideal. This is exactly the
/// condition that substituting x_i -> x_i + y x_j leaves every generator's
/// x-monomial support inside the ideal.
pub fn borel_stable_check(ideal: &MonomialIdeal, p: u64) -> Option<BorelStableWitness> {
    for g in ideal.gens() {
        for i in 0..ideal.arity() {
            if g.0[i] == 0 {
                continue;
            }
            for j in 0..i {
                for l in 1..=g.0[i] {
                    if binom_mod_p(g.0[i] as u64, l as u64, p) == 0 {
                        continue;
                    }
                    let mut e = g.0.clone();
                    e[i] -= l;
                    e[j] += l;
                    let m = Monomial(e);
                    if !ideal.contains(&m) {
                        return Some(BorelStableWitness {
                            generator: g.clone(),
                            i,
                            j,
                            l,
                            escaped: m,
                        });
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct BorelStableWitness {
    pub generator: Monomial,
    pub i: usize,
    pub j: usize,
    pub l: u32,
    pub escaped: Monomial,
}

/// Standard-monomial lattice of a monomial quotient: the exponent vectors
/// outside the ideal.
pub fn bep_lattice(alg: &QuotientAlgebra) -> Result<LatticeSet> {
    if !alg.is_monomial() {
        return Err(Error::NonMonomialIdeal);
    }
    LatticeSet::new(
        alg.arity(),
        alg.std().iter().map(|m| m.0.clone()).collect(),
    )
}

#[derive(Clone, Debug)]
pub struct GinReport {
    pub ideal: MonomialIdeal,
    pub quotient_dim: usize,
    pub samples: usize,
    pub samples_agreed: bool,
    pub extension_degree: usize,
    pub extension_cardinality: u128,
}

pub const GIN_MIN_EXTENSION_CARD: u128 = 1 << 16;

/// Extension degree t with q^t at least the sampling floor.
pub fn gin_extension_degree(field: &Arc<FieldSpec>, min_card: u128) -> Result<usize> {
    let mut t = 1usize;
    let mut card = field.cardinality();
    while card < min_card {
        card = card
            .checked_mul(field.cardinality())
            .ok_or(Error::FieldTooLarge)?;
        t += 1;
    }
    Ok(t)
}

/// Generic initial ideal of the homogeneous ideal spanned by `gens`:
/// `samples` independent random upper-triangular coordinate changes over a
/// degree-t tower extension; returns the grlex-greatest initial ideal seen
/// and whether all samples agreed. With q^t >= 2^16 per-sample failure
/// probability is bounded by deg/2^16 for a fixed nonzero obstruction.
pub fn gin_compute<R: Rng + ?Sized>(
    gens: &[Polynomial],
    t: usize,
    samples: usize,
    rng: &mut R,
) -> Result<GinReport> {
    if samples < 2 {
        return Err(Error::InvalidParam(
            "need at least two samples to cross-check".into(),
        ));
    }
    let first = gens
        .iter()
        .find(|g| !g.is_zero())
        .ok_or(Error::InvalidParam("no nonzero generators".into()))?;
    let field = first.field().clone();
    let n = first.arity();
    // the original quotient must be finite-dimensional; also records dim
    let base_alg = truncated_homogeneous_algebra(gens, DEFAULT_STABILIZATION_CAP)?;
    let ext = FieldSpec::extend(&field, t)?;
    let egens: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.extend_scalars(&ext))
        .collect::<Result<Vec<_>>>()?;
    let mut observed: Vec<MonomialIdeal> = Vec::new();
    for _ in 0..samples {
        let g = BorelMatrix::random(&ext, n, rng);
        let tg: Vec<Polynomial> = egens
            .iter()
            .map(|f| g.act(f))
            .collect::<Result<Vec<_>>>()?;
        let alg = truncated_homogeneous_algebra(&tg, DEFAULT_STABILIZATION_CAP)?;
        if alg.dim() != base_alg.dim() {
            return Err(Error::InvalidParam(format!(
                "initial ideal of a coordinate change has dim {} but the ideal has dim {}",
                alg.dim(),
                base_alg.dim()
            )));
        }
        observed.push(MonomialIdeal::new(n, alg.initial_generators()));
    }
    let samples_agreed = observed.windows(2).all(|w| w[0] == w[1]);
    let best = observed
        .into_iter()
        .max_by(|a, b| a.cmp_graded(b))
        .unwrap();
    Ok(GinReport {
        ideal: best,
        quotient_dim: base_alg.dim(),
        samples,
        samples_agreed,
        extension_degree: t,
        extension_cardinality: ext.cardinality(),
    })
}

/// Quotient algebra of a monomial ideal (finite-dimensional): reducers are
/// the bare generators.
pub fn monomial_quotient(
    field: &Arc<FieldSpec>,
    ideal: &MonomialIdeal,
    cap: u32,
) -> Result<QuotientAlgebra> {
    let gens: Vec<Polynomial> = ideal
        .gens()
        .iter()
        .map(|m| Polynomial::monomial(field.clone(), m.clone(), field.one()))
        .collect();
    truncated_homogeneous_algebra(&gens, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{vanishing_algebra, PointSet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn minimal_generators_are_pruned() {
        let i = MonomialIdeal::new(
            2,
            vec![
                Monomial(vec![2, 0]),
                Monomial(vec![2, 1]),
                Monomial(vec![0, 3]),
            ],
        );
        assert_eq!(i.gens().len(), 2);
        assert!(i.contains(&Monomial(vec![3, 4])));
        assert!(!i.contains(&Monomial(vec![1, 2])));
    }

    #[test]
    fn borel_stability_examples() {
        // <x1> is stable: moving weight from x1 only lands on smaller indices
        let stable = MonomialIdeal::new(2, vec![Monomial(vec![1, 0])]);
        assert!(borel_stable_check(&stable, 2).is_none());
        // <x2> is not: x2 -> x2 + y x1 escapes to x1
        let unstable = MonomialIdeal::new(2, vec![Monomial(vec![0, 1])]);
        let w = borel_stable_check(&unstable, 2).unwrap();
        assert_eq!(w.escaped, Monomial(vec![1, 0]));
        // characteristic matters: <x2^2, x1*x2, x1^2> stable over F_2;
        // <x2^2, x1^2> needs C(2,1) = 0 mod 2 to skip the l = 1 exchange
        let char_dep = MonomialIdeal::new(2, vec![Monomial(vec![2, 0]), Monomial(vec![0, 2])]);
        assert!(borel_stable_check(&char_dep, 2).is_none());
        assert!(borel_stable_check(&char_dep, 3).is_some());
    }

    #[test]
    fn gin_of_generic_points_is_stable_and_dim_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f3 = f(3);
        let s = PointSet::from_indices(
            f3.clone(),
            2,
            &[vec![0, 1], vec![1, 2], vec![2, 0], vec![1, 1]],
        )
        .unwrap();
        let alg = vanishing_algebra(&s, 1).unwrap();
        let gens: Vec<Polynomial> = alg.reducers().iter().map(|r| r.hd()).collect();
        let t = gin_extension_degree(&f3, GIN_MIN_EXTENSION_CARD).unwrap();
        let rep = gin_compute(&gens, t, 2, &mut rng).unwrap();
        assert!(rep.samples_agreed);
        assert_eq!(rep.quotient_dim, 4);
        assert!(borel_stable_check(&rep.ideal, 3).is_none());
        assert!(rep.extension_cardinality >= GIN_MIN_EXTENSION_CARD);
    }

    #[test]
    fn graded_comparison_is_a_total_preorder_on_same_hilbert() {
        let a = MonomialIdeal::new(2, vec![Monomial(vec![2, 0]), Monomial(vec![0, 1])]);
        let b = MonomialIdeal::new(2, vec![Monomial(vec![1, 0]), Monomial(vec![0, 2])]);
        // both quotients have dimension 2; degree-1 piece of a is {x2},
        // of b is {x1}; x1 > x2 so b is graded-greater
        assert_eq!(a.cmp_graded(&b), Ordering::Less);
        assert_eq!(b.cmp_graded(&a), Ordering::Greater);
        assert_eq!(a.cmp_graded(&a), Ordering::Equal);
    }
}
