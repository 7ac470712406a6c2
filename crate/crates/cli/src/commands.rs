use std::path::PathBuf;
use std::sync::Arc;

use num_integer::Integer;
use okmult::ideal_arith::{
    enumerate_ideals, factor_ideal, is_principal, minkowski_bound, principal, ClassGroup, IdealHnf,
};
use okmult::mean_values::{
    aperiodicity_scan, ball_average_elements, ball_average_ideals, concentration_check, halasz_prediction,
    prime_sums_report, residue_estimate, turan_kubilius_check, ConcentrationInput, PhaseModel,
};
use okmult::mult_funcs::{
    dirichlet_characters, extensions_of, pretentious_distance, unit_group_mod, AdditiveFn, ElementFn, FnSpec,
};
use okmult::regularity::{
    a_delta_average, folner_box, monochromatic_search, mult_density, reduce_form, weight_average, Coloring,
    ParamSolution, QuadraticForm,
};
use okmult::{QuadField, QuadInt};
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{AdditiveArg, Cli, Command, DomainArg, FormArgs, Ladder, PhaseArg};
use crate::report::{complex, float, int, text, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] okmult::Error),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(_) => 2,
            CliError::Input { .. } => 66,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn element(c: [i64; 2]) -> QuadInt {
    QuadInt::new(c[0] as i128, c[1] as i128)
}

fn nonzero(c: [i64; 2], what: &str) -> Result<QuadInt> {
    let u = element(c);
    if u.is_zero() {
        return Err(okmult::Error::PreconditionError(format!("{what} must be nonzero")).into());
    }
    Ok(u)
}

/// Checkpoints not above `n`, with `n` itself, ascending.
fn ladder(n: u64, checkpoints: &Option<Ladder>) -> Vec<u64> {
    let mut out: Vec<u64> = checkpoints.iter().flat_map(|l| &l.0).copied().filter(|&c| c >= 1 && c < n).collect();
    out.push(n);
    out.sort_unstable();
    out.dedup();
    out
}

fn label_text(label: &[u32]) -> String {
    let parts: Vec<String> = label.iter().map(u32::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn solution(field: &QuadField, form: &FormArgs) -> Result<ParamSolution> {
    let [a, b, c, e, f, g] = form.form.map(|v| v as i128);
    Ok(reduce_form(field, &QuadraticForm::new(a, b, c, e, f, g), form.pair)?)
}

fn describe(report: &mut Report, sol: &ParamSolution) {
    report.note("ell", text(sol.ell));
    report.note("ell_prime", text(sol.ell_prime));
    report.note("alpha", text(sol.alpha));
    report.note("beta", text(sol.beta));
}

pub fn run(cli: &Cli) -> Result<Report> {
    let field = QuadField::new(cli.d)?;
    let params = serde_json::to_value(&cli.command).expect("arguments serialize");
    let group = || Arc::new(ClassGroup::compute(&field, None));
    let new = |name: &str, columns: &[&str]| Report::new(name, cli.d, cli.seed, params.clone(), columns);

    let report = match &cli.command {
        Command::FieldInfo => {
            let mut r = new("field-info", &["d", "disc", "tau_case", "w", "minkowski_bound", "class_number"]);
            let tau_case = serde_json::to_value(field.tau_case()).expect("serializes");
            r.row([
                int(field.d()),
                int(field.disc()),
                tau_case,
                int(field.w()),
                int(minkowski_bound(&field)),
                int(group().class_number() as u64),
            ]);
            r
        }

        Command::Ideals { max_norm } => {
            let mut r = new("ideals", &["norm", "a", "b", "c", "principal", "generator"]);
            for i in enumerate_ideals(&field, *max_norm) {
                let gen = is_principal(&field, &i);
                r.row([
                    int(i.norm()),
                    int(i.a()),
                    int(i.b()),
                    int(i.c()),
                    Value::Bool(gen.is_some()),
                    text(gen.map(|g| g.to_string()).unwrap_or_default()),
                ]);
            }
            r.note("count", r.rows.len());
            r
        }

        Command::Factor { element: elem, ideal } => {
            let target = match (elem, ideal) {
                (Some(u), _) => principal(&field, nonzero(*u, "element")?),
                (None, Some([a, b, c])) => IdealHnf::from_triple(&field, *a as i128, *b as i128, *c as i128)
                    .ok_or_else(|| okmult::Error::PreconditionError(format!("[{a},{b},{c}] is an ideal in HNF")))?,
                (None, None) => return Err(okmult::Error::PreconditionError("one of --element, --ideal".into()).into()),
            };
            let fac = factor_ideal(&field, &target);
            let mut r = new("factor", &["prime", "p", "split", "a", "b", "c", "exponent"]);
            for (q, k) in &fac.factors {
                r.row([
                    text(q),
                    int(q.p),
                    serde_json::to_value(q.split).expect("serializes"),
                    int(q.hnf.a()),
                    int(q.hnf.b()),
                    int(q.hnf.c()),
                    int(*k),
                ]);
            }
            r.note("ideal", text(target));
            r.note("norm", int(target.norm()));
            r.note("factorization", text(&fac));
            r
        }

        Command::ClassGroup => {
            let cg = group();
            let mut r = new("class-group", &["a", "b", "c", "order", "generator"]);
            let mut gens = Vec::new();
            for g in cg.generators() {
                r.row([int(g.ideal.a()), int(g.ideal.b()), int(g.ideal.c()), int(g.order), text(g.generator)]);
                gens.push(
                    json!({"ideal": g.ideal.to_string(), "order": g.order, "generator": g.generator.to_string()}),
                );
            }
            r.note("h", cg.class_number());
            r.note("orders", cg.orders());
            r.note("generators", gens);
            r
        }

        Command::Characters { modulus } => {
            let ideal = principal(&field, nonzero(*modulus, "modulus")?);
            let group = unit_group_mod(&field, &ideal)?;
            let orders = group.orders();
            let residues = group.elements();
            let mut r = new("characters", &["index", "label", "order", "sum_re", "sum_im"]);
            for (idx, chi) in group.characters().iter().enumerate() {
                let order = chi.label().iter().zip(&orders).fold(1u32, |acc, (&k, &o)| acc.lcm(&(o / k.gcd(&o))));
                let sum: num_complex::Complex64 = residues.iter().map(|&u| chi.eval(u)).sum();
                r.row([int(idx as u64), text(label_text(chi.label())), int(order), float(sum.re), float(sum.im)]);
            }
            r.note("modulus", text(ideal));
            r.note("group_order", group.order());
            r.note("cyclic_orders", orders);
            r
        }

        Command::Extensions { function } => {
            let cg = group();
            let f = FnSpec::parse(&function.function)?.element(&cg)?;
            let exts = extensions_of(&cg, &f)?;
            let mut r = new("extensions", &["choice", "generator", "re", "im"]);
            for (choice, ext) in exts.iter().enumerate() {
                for g in cg.generators() {
                    let v = ext.eval(&field, &g.ideal);
                    r.row([int(choice as u64), text(g.ideal), float(v.re), float(v.im)]);
                }
            }
            r.note("function", f.id());
            r.note("count", exts.len());
            r
        }

        Command::Distance { function, with, m, n } => {
            let cg = group();
            let f = FnSpec::parse(&function.function)?.ideal(&cg)?;
            let g = FnSpec::parse(with)?.ideal(&cg)?;
            let mut r = new("distance", &["M", "N", "distance"]);
            r.row([int(*m), int(*n), float(pretentious_distance(&field, &f, &g, *m, *n))]);
            r
        }

        Command::Average { function, n, checkpoints, domain } => {
            let cg = group();
            let spec = FnSpec::parse(&function.function)?;
            let steps = ladder(*n, checkpoints);
            let avg = match domain {
                DomainArg::Elements => ball_average_elements(&field, &spec.element(&cg)?, *n, &steps),
                DomainArg::Ideals => ball_average_ideals(&field, &spec.ideal(&cg)?, *n, &steps),
            };
            let mut r = new("average", &["N", "re", "im", "abs"]);
            for c in &avg.checkpoints {
                let [re, im, abs] = complex(c.value);
                r.row([int(c.n), re, im, abs]);
            }
            r.note("function", avg.function);
            r.note("counts", avg.checkpoints.iter().map(|c| c.count).collect::<Vec<_>>());
            r
        }

        Command::ScanAperiodic { function, n, coeff_bound } => {
            let g = FnSpec::parse(&function.function)?.element(&group())?;
            let scan = aperiodicity_scan(&field, &g, *coeff_bound as i128, *n);
            let mut r = new("scan-aperiodic", &["a1", "b1", "a2", "b2", "re", "im", "abs", "count"]);
            for ga in &scan.grids {
                let [re, im, abs] = complex(ga.value);
                let gr = ga.grid;
                r.row([int(gr.a1), int(gr.b1), int(gr.a2), int(gr.b2), re, im, abs, int(ga.count)]);
            }
            r.note("max_abs", float(scan.max_abs));
            let a = scan.argmax;
            r.note("argmax", vec![int(a.a1), int(a.b1), int(a.a2), int(a.b2)]);
            r
        }

        Command::Halasz { function, tau, x, r1, r1_reference } => {
            let g = FnSpec::parse(&function.function)?.ideal(&group())?;
            let r1 = r1.unwrap_or_else(|| residue_estimate(&field, *r1_reference));
            let h = halasz_prediction(&field, &g, *tau, *x, r1);
            let mut r = new(
                "halasz",
                &[
                    "x",
                    "tau",
                    "r1",
                    "prediction_re",
                    "prediction_im",
                    "empirical_re",
                    "empirical_im",
                    "relative_gap",
                    "distance",
                ],
            );
            r.row([
                int(h.x),
                float(h.tau),
                float(h.r1),
                float(h.prediction.re),
                float(h.prediction.im),
                float(h.empirical.re),
                float(h.empirical.im),
                float(h.relative_gap),
                float(h.distance),
            ]);
            r.note("function", h.function);
            r.note("euler_product", vec![float(h.euler_product.re), float(h.euler_product.im)]);
            r
        }

        Command::Tk { h, q, a, m, n, checkpoints } => {
            let additive = match h {
                AdditiveArg::Omega => AdditiveFn::omega(),
                AdditiveArg::BigOmega => AdditiveFn::big_omega(),
                AdditiveArg::Zero => AdditiveFn::zero(),
            };
            let mut r = new("tk", &["N", "lhs", "a_re", "a_im", "b", "c", "ratio", "count"]);
            for step in ladder(*n, checkpoints) {
                let t = turan_kubilius_check(&field, &additive, element(*q), element(*a), *m, step)?;
                r.row([
                    int(step),
                    float(t.lhs),
                    float(t.a_qn.re),
                    float(t.a_qn.im),
                    float(t.b_nprime),
                    float(t.c_n),
                    float(t.ratio),
                    int(t.count),
                ]);
            }
            r.note("function", additive.id());
            r
        }

        Command::Concentrate { function, chi, tau, fprime, m, n, q, a, phase, distance_cutoff } => {
            let cg = group();
            let f = FnSpec::parse(&function.function)?.element(&cg)?;
            let q = nonzero(*q, "Q")?;
            let chi = match chi {
                Some(text) => match FnSpec::parse(text)? {
                    FnSpec::Character { modulus, label, .. } => {
                        match (FnSpec::Character { modulus, label, modified: true }).element(&cg)? {
                            ElementFn::Character(c) => c,
                            _ => unreachable!("character specs build characters"),
                        }
                    }
                    other => {
                        return Err(okmult::Error::PreconditionError(format!(
                            "--chi is a character, got {}",
                            other.to_json()
                        ))
                        .into())
                    }
                },
                None => dirichlet_characters(&field, &principal(&field, q))?[0].modify()?,
            };
            let f_prime = match fprime {
                Some(text) => FnSpec::parse(text)?.ideal(&cg)?,
                None => {
                    let base =
                        f.clone().times(ElementFn::Character(chi.clone()).conj()).times(ElementFn::Archimedean(-tau));
                    extensions_of(&cg, &base)?.swap_remove(0)
                }
            };
            let input = ConcentrationInput {
                f: &f,
                chi: &chi,
                tau: *tau,
                f_prime: &f_prime,
                m: *m,
                n: *n,
                q,
                a: element(*a),
                phase: match phase {
                    PhaseArg::Displayed => PhaseModel::Displayed,
                    PhaseArg::Complex => PhaseModel::Complex,
                },
                distance_cutoff: distance_cutoff.unwrap_or(*n),
            };
            let c = concentration_check(&field, &input)?;
            let mut r =
                new("concentrate", &["N", "empirical", "rhs_bound", "distance", "f_sum_re", "f_sum_im", "count"]);
            r.row([
                int(*n),
                float(c.empirical_sup),
                float(c.rhs_bound),
                float(c.distance),
                float(c.f_sum.re),
                float(c.f_sum.im),
                int(c.count),
            ]);
            r.note("function", f.id());
            r.note("chi", chi.id());
            r.note("f_prime", f_prime.id());
            r
        }

        Command::Folner { m } => {
            let spec = folner_box(&field, &group(), *m)?;
            let mut r = new("folner", &["index", "exponents", "x", "y", "norm"]);
            for (idx, (u, e)) in spec.elements.iter().zip(&spec.exponents).enumerate() {
                r.row([int(idx as u64), text(label_text(e)), int(u.x), int(u.y), int(field.norm(*u))]);
            }
            r.note("primes", spec.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            r.note("size", spec.len());
            r
        }

        Command::Density { m, divisor } => {
            let divisor = nonzero(*divisor, "divisor")?;
            let cg = group();
            let specs = (2..=*m).map(|level| folner_box(&field, &cg, level)).collect::<okmult::Result<Vec<_>>>()?;
            if specs.is_empty() {
                return Err(okmult::Error::PreconditionError("M >= 2".into()).into());
            }
            let mut r = new("density", &["M", "size", "density"]);
            for ((level, dens), spec) in mult_density(&specs, |u| field.divides(divisor, u)).into_iter().zip(&specs) {
                r.row([int(level), int(spec.len() as u64), float(dens)]);
            }
            r
        }

        Command::Weights { form, delta, n, checkpoints } => {
            let sol = solution(&field, form)?;
            let mut r = new("weights", &["N", "weight"]);
            for step in ladder(*n, checkpoints) {
                r.row([int(step), float(weight_average(&sol, *delta, step)?)]);
            }
            describe(&mut r, &sol);
            r
        }

        Command::Adelta { function, form, delta, q, n, checkpoints } => {
            let g = FnSpec::parse(&function.function)?.element(&group())?;
            let sol = solution(&field, form)?;
            let mut r = new("adelta", &["N", "re", "im", "abs", "weight"]);
            for step in ladder(*n, checkpoints) {
                let [re, im, abs] = complex(a_delta_average(&g, &sol, *delta, element(*q), step)?);
                r.row([int(step), re, im, abs, float(weight_average(&sol, *delta, step)?)]);
            }
            r.note("function", g.id());
            describe(&mut r, &sol);
            r
        }

        Command::Search { form, coloring, bound, limit } => {
            let rule = std::fs::read_to_string(coloring)
                .map_err(|source| CliError::Input { path: coloring.clone(), source })?;
            let coloring = Coloring::from_json(&rule)?;
            let sol = solution(&field, form)?;
            let mut r = new("search", &["k", "m", "n", "x", "y", "z", "color"]);
            for hit in monochromatic_search(&sol, &coloring, *bound as i128, *limit) {
                let [x, y, z] = hit.triple;
                r.row([text(hit.k), text(hit.m), text(hit.n), text(x), text(y), text(z), int(hit.color)]);
            }
            r.note("found", r.rows.len());
            describe(&mut r, &sol);
            r
        }

        Command::PrimeSums { n, epsilon, tail_cutoff } => {
            let p = prime_sums_report(&field, *n, *epsilon, *tail_cutoff)?;
            let mut r = new(
                "prime-sums",
                &[
                    "N",
                    "epsilon",
                    "prime_powers",
                    "prime_powers_ratio",
                    "reciprocal_prime_powers",
                    "reciprocal_ratio",
                    "window",
                    "tail",
                    "tail_cutoff",
                    "log_weighted",
                    "two_prime",
                    "two_prime_ratio",
                    "reciprocal_primes",
                ],
            );
            r.row([
                int(p.n),
                float(p.epsilon),
                int(p.prime_powers),
                float(p.prime_powers_ratio),
                float(p.reciprocal_prime_powers),
                float(p.reciprocal_ratio),
                float(p.window),
                float(p.tail),
                int(p.tail_cutoff),
                float(p.log_weighted),
                int(p.two_prime),
                float(p.two_prime_ratio),
                float(p.reciprocal_primes),
            ]);
            r
        }
    };
    Ok(report)
}
