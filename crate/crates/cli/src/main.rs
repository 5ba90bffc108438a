//! Command-line front end: ingestion, experiment drivers, bound calculators,
//! example reproductions, and JSON reporting.
//!
//! Exit codes: 0 when the command succeeds and every checked claim holds,
//! 2 when a claim is violated, 1 on usage or guard errors. All randomness
//! comes from --seed (default 0); identical command + seed gives identical
//! stdout bytes. Wall time goes to stderr so it never perturbs the output.

use clap::{Parser, Subcommand};
use furst_core::algebra::{vanishing_algebra, PointSet};
use furst_core::bounds;
use furst_core::error::{Error, Result};
use furst_core::field::FieldSpec;
use furst_core::gin::{bep_lattice, borel_stable_check, gin_compute, gin_extension_degree, monomial_quotient, GIN_MIN_EXTENSION_CARD};
use furst_core::lattice::{d_formula, f_formula, lattice_lower_bound_check, LatticeSet};
use furst_core::poly::linear_form;
use furst_core::rich::{jm_is_zero, theorem_nonzero_case_check, JmReport, JmVerdict};
use furst_core::sets::{
    furstenberg_m, hyper_furstenberg_check_set, min_furstenberg_search, power_algebra, q_example,
    r_n_example,
};
use furst_core::util::binom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "furst", disable_help_subcommand = true)]
struct Cli {
    /// Seed for every probabilistic subroutine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe a finite field given in p^e or p^e:t notation.
    Field {
        #[arg(long)]
        field: String,
    },
    /// Interpolation algebra of a point set: standard monomials and reducers.
    Algebra {
        #[arg(long)]
        points: String,
        /// Multiplicity order of the vanishing conditions.
        #[arg(long, default_value_t = 1)]
        l: u32,
    },
    /// Verify a Furstenberg-type claim about a point set.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Minor-ideal vanishing of the multiplication matrix of Alg(S).
    Jm {
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 1)]
        l: u32,
        /// Richness parameter: minors of size dim - m + 1.
        #[arg(long)]
        m: usize,
        /// Extension degree for sampling (0 = automatic floor).
        #[arg(long, default_value_t = 0)]
        ext: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Generic initial ideal of the homogenized vanishing ideal of a point set.
    Gin {
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 1)]
        l: u32,
        /// Extension degree (0 = least t with q^t >= 2^16).
        #[arg(long, default_value_t = 0)]
        ext: usize,
        #[arg(long, default_value_t = 2)]
        trials: usize,
    },
    /// Evaluate a closed-form bound.
    Bound {
        /// One of: easy, kakeya, set, parametric, hyper, upper-example,
        /// subspace-count, gaussian, d-coeff, f-coeff.
        id: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Exchange property and the staged-path lower bound of a lattice set.
    Lattice {
        /// JSON file holding {"n": .., "points": [[..]]}.
        #[arg(long)]
        points: String,
    },
    /// Reproduce a worked example end to end.
    Demo {
        /// One of: q-example, r-n, power.
        name: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Smallest set meeting every k-direction in >= m points (tiny grids).
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// Run the built-in verification battery.
    Selftest,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Every k-direction has a translate meeting the set in >= m points.
    Furstenberg {
        #[arg(long)]
        points: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// Every hyperplane power (h.x)^d admits a lower-degree perturbation
    /// vanishing on >= m points of the set.
    Hyper {
        #[arg(long)]
        points: String,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: usize,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(1);
        }
    };
    let start = Instant::now();
    let seed = cli.seed;
    match dispatch(cli) {
        Ok((report, holds)) => {
            let mut out = report;
            out["seed"] = json!(seed);
            out["holds"] = json!(holds);
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            eprintln!("wall_time_ms: {}", start.elapsed().as_millis());
            std::process::exit(if holds { 0 } else { 2 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn read_points(path: &str) -> Result<PointSet> {
    let txt = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    let v: Value =
        serde_json::from_str(&txt).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
    PointSet::from_json(&v)
}

fn read_lattice(path: &str) -> Result<LatticeSet> {
    let txt = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    let v: Value =
        serde_json::from_str(&txt).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
    LatticeSet::from_json(&v)
}

fn jm_json(r: &JmReport) -> Value {
    let verdict = match &r.verdict {
        JmVerdict::Zero => json!({"kind": "zero"}),
        JmVerdict::Nonzero { witness } => json!({
            "kind": "nonzero",
            "witness_len": witness.len(),
        }),
    };
    json!({
        "dim": r.dim,
        "m": r.m,
        "threshold": r.threshold,
        "max_rank": r.max_rank,
        "samples": r.samples,
        "extension_degree": r.extension_degree,
        "extension_cardinality": r.extension_cardinality as u64,
        "error_bound": r.error_bound,
        "verdict": verdict,
    })
}

fn dispatch(cli: Cli) -> Result<(Value, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match cli.cmd {
        Cmd::Field { field } => {
            let f = FieldSpec::parse(&field)?;
            let report = json!({
                "command": "field",
                "notation": f.notation(),
                "characteristic": f.characteristic(),
                "cardinality": f.cardinality() as u64,
                "degree_over_base": f.degree_over_base(),
                "modulus_indices": f.modulus().iter().map(|c| {
                    f.base().map(|b| b.index_of(c) as u64).unwrap_or(0)
                }).collect::<Vec<u64>>(),
            });
            Ok((report, true))
        }
        Cmd::Algebra { points, l } => {
            let s = read_points(&points)?;
            let alg = vanishing_algebra(&s, l)?;
            let expected =
                s.len() as u128 * furst_core::algebra::functional_count(s.arity(), l);
            let report = json!({
                "command": "algebra",
                "field": s.field().notation(),
                "n": s.arity(),
                "size": s.len(),
                "l": l,
                "dim": alg.dim(),
                "expected_dim": expected as u64,
                "std": alg.std().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "initial_generators": alg.initial_generators().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            });
            let holds = alg.dim() as u128 == expected;
            Ok((report, holds))
        }
        Cmd::Check { what } => match what {
            CheckCmd::Furstenberg { points, k, m } => {
                let s = read_points(&points)?;
                let value = furstenberg_m(&s, k)?;
                let report = json!({
                    "command": "check furstenberg",
                    "field": s.field().notation(),
                    "n": s.arity(),
                    "size": s.len(),
                    "k": k,
                    "m": m,
                    "min_max_intersection": value,
                });
                Ok((report, value >= m))
            }
            CheckCmd::Hyper { points, d, m } => {
                let s = read_points(&points)?;
                let rep = hyper_furstenberg_check_set(&s, d, m)?;
                let report = json!({
                    "command": "check hyper",
                    "field": s.field().notation(),
                    "n": s.arity(),
                    "size": s.len(),
                    "d": d,
                    "m": m,
                    "hyperplanes": rep.hyperplanes,
                    "candidates_per_hyperplane": rep.candidates_per_hyperplane as u64,
                    "failing": rep.failing,
                });
                Ok((report, rep.holds))
            }
        },
        Cmd::Jm {
            points,
            l,
            m,
            ext,
            trials,
        } => {
            let s = read_points(&points)?;
            let alg = vanishing_algebra(&s, l)?;
            let rep = jm_is_zero(&alg, m, ext, trials, &mut rng)?;
            let report = json!({
                "command": "jm",
                "field": s.field().notation(),
                "n": s.arity(),
                "size": s.len(),
                "l": l,
                "jm": jm_json(&rep),
            });
            Ok((report, true))
        }
        Cmd::Gin {
            points,
            l,
            ext,
            trials,
        } => {
            let s = read_points(&points)?;
            let alg = vanishing_algebra(&s, l)?;
            let hd = alg.hd_algebra();
            let gens = hd.reducers().to_vec();
            let t = if ext == 0 {
                gin_extension_degree(s.field(), GIN_MIN_EXTENSION_CARD)?
            } else {
                ext
            };
            let rep = gin_compute(&gens, t, trials, &mut rng)?;
            let stability = borel_stable_check(&rep.ideal, s.field().characteristic());
            let quot = monomial_quotient(s.field(), &rep.ideal, 64)?;
            let lat = bep_lattice(&quot)?;
            let exchange = lat.exchange_check();
            let holds = rep.samples_agreed && stability.is_none() && exchange.is_none();
            let report = json!({
                "command": "gin",
                "field": s.field().notation(),
                "n": s.arity(),
                "size": s.len(),
                "l": l,
                "gin_generators": rep.ideal.gens().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "quotient_dim": rep.quotient_dim,
                "samples": rep.samples,
                "samples_agreed": rep.samples_agreed,
                "extension_degree": rep.extension_degree,
                "extension_cardinality": rep.extension_cardinality as u64,
                "borel_stable": stability.is_none(),
                "exchange_holds": exchange.is_none(),
            });
            Ok((report, holds))
        }
        Cmd::Bound {
            id,
            n,
            k,
            m,
            q,
            d,
            eps,
        } => {
            let need = |o: Option<u64>, name: &str| {
                o.ok_or_else(|| Error::InvalidParam(format!("bound {id} needs --{name}")))
            };
            let needn = |o: Option<usize>, name: &str| {
                o.ok_or_else(|| Error::InvalidParam(format!("bound {id} needs --{name}")))
            };
            let rep = match id.as_str() {
                "easy" => bounds::easy_bound(
                    needn(n, "n")?,
                    needn(k, "k")?,
                    need(m, "m")?,
                    need(q, "q")?,
                )?,
                "kakeya" => bounds::kakeya_bound(needn(n, "n")?, need(m, "m")?)?,
                "set" => bounds::set_bound(needn(n, "n")?, needn(k, "k")?, need(m, "m")?)?,
                "parametric" => bounds::parametric_bound(
                    needn(n, "n")?,
                    needn(k, "k")?,
                    need(m, "m")?,
                    need(q, "q")?,
                    eps.ok_or_else(|| Error::InvalidParam("bound parametric needs --eps".into()))?,
                )?,
                "hyper" => bounds::hyper_bound(needn(n, "n")?, need(d, "d")?, need(m, "m")?)?,
                "upper-example" => {
                    bounds::upper_bound_example(needn(n, "n")?, needn(k, "k")?, need(q, "q")?)?
                }
                "subspace-count" => {
                    bounds::subspace_count(needn(n, "n")?, needn(k, "k")?, need(q, "q")?)?
                }
                "gaussian" => {
                    let v = bounds::gaussian_binomial(needn(n, "n")?, needn(k, "k")?, need(q, "q")?)?;
                    let report = json!({
                        "command": "bound",
                        "id": "gaussian",
                        "value": v as u64,
                    });
                    return Ok((report, true));
                }
                "d-coeff" => {
                    let df = d_formula(needn(n, "n")?, need(m, "m")? as f64)?;
                    let report = json!({
                        "command": "bound",
                        "id": "d-coeff",
                        "d": df.d,
                        "d_floor": df.d_floor,
                        "beta": df.beta,
                        "raw": df.raw,
                        "value": df.value,
                    });
                    return Ok((report, true));
                }
                "f-coeff" => {
                    let ff =
                        f_formula(needn(n, "n")?, need(m, "m")? as f64, need(q, "q")? as f64)?;
                    let report = json!({
                        "command": "bound",
                        "id": "f-coeff",
                        "value": ff.value,
                        "f": ff.f,
                        "l": ff.l,
                        "in_hypothesis": ff.in_hypothesis,
                    });
                    return Ok((report, true));
                }
                other => {
                    return Err(Error::InvalidParam(format!("unknown bound id `{other}`")))
                }
            };
            let mut report = rep.to_json();
            report["command"] = json!("bound");
            Ok((report, true))
        }
        Cmd::Lattice { points } => {
            let lat = read_lattice(&points)?;
            let exchange = lat.exchange_check();
            if let Some(w) = &exchange {
                let report = json!({
                    "command": "lattice",
                    "n": lat.arity(),
                    "size": lat.len(),
                    "exchange_holds": false,
                    "witness": {
                        "lambda": w.lambda,
                        "missing": w.missing,
                    },
                });
                return Ok((report, false));
            }
            let rep = lattice_lower_bound_check(&lat)?;
            let report = json!({
                "command": "lattice",
                "n": rep.n,
                "size": rep.total,
                "exchange_holds": true,
                "slice_size": rep.slice_size,
                "path_union": rep.path_union,
                "weight_sum_scaled": rep.weight_sum_scaled,
                "d_raw": rep.d_raw,
                "d_value": rep.d_value,
                "closed_form": rep.closed_form,
            });
            Ok((report, rep.holds))
        }
        Cmd::Demo {
            name,
            q,
            n,
            d,
            trials,
        } => demo(&name, q, n, d, trials, &mut rng),
        Cmd::Search { q, n, k, m } => {
            let rep = min_furstenberg_search(q, n, k, m)?;
            let report = json!({
                "command": "search",
                "q": rep.q,
                "n": rep.n,
                "k": rep.k,
                "m": rep.m,
                "size": rep.size,
                "exact": rep.exact,
                "example": rep.example.iter().map(|p| p.iter().map(|c| *c as u64).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok((report, true))
        }
        Cmd::Selftest => selftest(&mut rng),
    }
}

fn demo(
    name: &str,
    q: Option<u64>,
    n: Option<usize>,
    d: Option<u64>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Value, bool)> {
    match name {
        "q-example" => {
            let alg = q_example()?;
            let f2 = alg.field().clone();
            // the three rational lines: x1, x2, x1 + x2
            let one = f2.one();
            let zero = f2.zero();
            let lines = [
                vec![one.clone(), zero.clone()],
                vec![zero.clone(), one.clone()],
                vec![one.clone(), one.clone()],
            ];
            let mut rich = Vec::new();
            for h in &lines {
                let form = linear_form(&f2, h);
                rich.push(alg.quotient_dim(&[form])?);
            }
            let all_rich_10 = rich.iter().all(|r| *r >= 10);
            let jm = jm_is_zero(&alg, 10, 2, trials, rng)?;
            let jm_nonzero = matches!(jm.verdict, JmVerdict::Nonzero { .. });
            // over F_4 some line x1 + a x2 (a outside F_2) is poor
            let f4 = FieldSpec::extend(&f2, 2)?;
            let ealg = alg.extend_scalars(2)?;
            let mut poor_line = None;
            for a in f4.elements() {
                if f4.is_zero(&a) || a == f4.one() {
                    continue;
                }
                let form = linear_form(&f4, &[f4.one(), a.clone()]);
                let r = ealg.quotient_dim(&[form])?;
                if r < 10 {
                    poor_line = Some((f4.index_of(&a) as u64, r));
                    break;
                }
            }
            let holds = all_rich_10 && jm_nonzero && poor_line.is_some();
            let report = json!({
                "command": "demo q-example",
                "dim": alg.dim(),
                "line_richness": rich,
                "all_lines_rich_ge_10": all_rich_10,
                "jm": jm_json(&jm),
                "jm_10_nonzero": jm_nonzero,
                "poor_line_over_ext": poor_line.map(|(a, r)| json!({
                    "a_index": a, "rich_dim": r
                })),
            });
            Ok((report, holds))
        }
        "r-n" => {
            let q = q.ok_or_else(|| Error::InvalidParam("demo r-n needs --q".into()))?;
            let nexp = n.ok_or_else(|| Error::InvalidParam("demo r-n needs --n".into()))? as u32;
            let alg = r_n_example(q, nexp)?;
            let rich = furst_core::sets::hom_furstenberg_m(&alg, 1)?;
            let qn = (q as u128).pow(nexp) as usize;
            let qn1 = (q as u128).pow(nexp + 1) as usize;
            let holds = rich >= qn && alg.dim() <= qn1;
            let report = json!({
                "command": "demo r-n",
                "q": q,
                "nexp": nexp,
                "dim": alg.dim(),
                "hom_furstenberg_m": rich,
                "m_target": qn as u64,
                "dim_budget": qn1 as u64,
            });
            Ok((report, holds))
        }
        "power" => {
            let n = n.ok_or_else(|| Error::InvalidParam("demo power needs --n".into()))?;
            let d = d.ok_or_else(|| Error::InvalidParam("demo power needs --d".into()))? as u32;
            let q = q.unwrap_or(2);
            let field = FieldSpec::prime(q)?;
            let alg = power_algebra(&field, n, d)?;
            let mstar = binom((d as u64) + n as u64 - 2, n as u64 - 1) as usize;
            let at_star = jm_is_zero(&alg, mstar, 0, trials, rng)?;
            let zero_at_star = matches!(at_star.verdict, JmVerdict::Zero);
            let mut nonzero_above = true;
            let mut above = None;
            if mstar + 1 <= alg.dim() {
                let r = jm_is_zero(&alg, mstar + 1, 0, trials, rng)?;
                nonzero_above = matches!(r.verdict, JmVerdict::Nonzero { .. });
                above = Some(jm_json(&r));
            }
            let holds = zero_at_star && nonzero_above;
            let report = json!({
                "command": "demo power",
                "q": q,
                "n": n,
                "d": d,
                "dim": alg.dim(),
                "m_star": mstar as u64,
                "jm_at_m_star": jm_json(&at_star),
                "jm_above": above,
            });
            Ok((report, holds))
        }
        other => Err(Error::InvalidParam(format!("unknown demo `{other}`"))),
    }
}

fn selftest(rng: &mut ChaCha8Rng) -> Result<(Value, bool)> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let push = |checks: &mut Vec<(String, bool)>, name: &str, ok: bool| {
        checks.push((name.to_string(), ok));
    };

    // interpolation dimension on random sets
    let mut dim_ok = true;
    for q in [2u64, 3, 5] {
        let field = FieldSpec::prime(q)?;
        let grid = field.cardinality().pow(2) as usize;
        for _ in 0..5 {
            let size = 1 + (rand::Rng::gen_range(rng, 0..grid.min(8)));
            let s = furst_core::sets::random_point_set(&field, 2, size, rng)?;
            let alg = vanishing_algebra(&s, 1)?;
            if alg.dim() != s.len() {
                dim_ok = false;
            }
        }
    }
    push(&mut checks, "interpolation_dimension", dim_ok);

    // power-ideal minor vanishing threshold
    let f2 = FieldSpec::prime(2)?;
    let alg = power_algebra(&f2, 2, 3)?;
    let mstar = binom(3, 1) as usize;
    let at = jm_is_zero(&alg, mstar, 0, 3, rng)?;
    let above = jm_is_zero(&alg, mstar + 1, 0, 3, rng)?;
    push(
        &mut checks,
        "power_minor_threshold",
        matches!(at.verdict, JmVerdict::Zero)
            && matches!(above.verdict, JmVerdict::Nonzero { .. }),
    );

    // worked product example
    let qalg = q_example()?;
    let one = qalg.field().one();
    let zero = qalg.field().zero();
    let mut rich_ok = true;
    for h in [
        vec![one.clone(), zero.clone()],
        vec![zero.clone(), one.clone()],
        vec![one.clone(), one.clone()],
    ] {
        let form = linear_form(qalg.field(), &h);
        if qalg.quotient_dim(&[form])? < 10 {
            rich_ok = false;
        }
    }
    push(&mut checks, "q_example_lines_rich", rich_ok);

    // lattice bound on a simplex slice
    let mut pts = Vec::new();
    for a in 0..4u32 {
        for b in 0..4u32 - a {
            for c in 0..4u32 - a - b {
                pts.push(vec![a, b, c]);
            }
        }
    }
    let lat = LatticeSet::new(3, pts)?;
    let rep = lattice_lower_bound_check(&lat)?;
    push(
        &mut checks,
        "lattice_lower_bound",
        lat.exchange_check().is_none() && rep.holds,
    );

    // bound evaluator pinned value: sqrt(6) * 3
    let b = bounds::easy_bound(3, 1, 3, 3)?;
    push(
        &mut checks,
        "easy_bound_value",
        (b.value - 6.0f64.sqrt() * 3.0).abs() < bounds::ASSERT_TOL,
    );

    // exhaustive search matches the easy bound on the tiny grid
    let s = min_furstenberg_search(2, 2, 1, 2)?;
    push(&mut checks, "search_f2_grid", s.exact && s.size == 3);

    // nonzero-case inequality on the full grid algebra
    let grid = furst_core::algebra::full_grid(&f2, 2)?;
    let galg = vanishing_algebra(&grid, 1)?;
    let nz = theorem_nonzero_case_check(&galg, 2, 1, 0, 3, rng)?;
    push(&mut checks, "nonzero_case_inequality", nz.holds);

    let holds = checks.iter().all(|(_, ok)| *ok);
    let report = json!({
        "command": "selftest",
        "checks": checks.iter().map(|(name, ok)| json!({
            "name": name, "pass": ok
        })).collect::<Vec<_>>(),
    });
    Ok((report, holds))
}
