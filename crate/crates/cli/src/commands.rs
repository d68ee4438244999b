use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use num_bigint::BigInt;
use serde_json::json;

use diagonals::dl::{compare_fixture, dl_full, DlError};
use diagonals::expr::parse_validated;
use diagonals::hypergeom::{
    closed_form_s, coefficient_sum_oracle, family_recurrence, family_spec, gb_heuristic, globally_bounded_witness,
    hadamard_factorizations, height, hyp_series, ode_apply, ode_family, recurrence_verify_symbolic, GbVerdict,
    GbWitness, HypergeomSpec,
};
use diagonals::identity::{builtin_suite, run_suite, IdentityCase, Recipe, Status};
use diagonals::modp::{
    guess_mahler, guess_minpoly_mod, hyp_series_mod_precision, verify_relation, write_binary, write_sparse_text,
    EqKind, FunctionalEq, ModpError, RelationCheck,
};
use diagonals::rational::{int, parse_rational, Rational};
use diagonals::series::{expand, SeriesError, SeriesJson};
use diagonals::telescoping::{certificate_verify, family_summand, pole_free_grid, zeilberger, Factor, HyperTerm, Lin};

use crate::{Command, ExprArgs, Failure, Outcome};

#[derive(Args, Debug)]
pub struct ModpArgs {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Highest coefficient index.
    #[arg(short = 'N', long = "degree")]
    n: usize,
    /// Working precision in p-adic digits for the unit parts.
    #[arg(long, env = "DIAGONALS_PRECISION")]
    precision: Option<u32>,
    /// Replace F by c * (F - F(0)) / p before further work.
    #[arg(long)]
    lift_scale: Option<u64>,
    /// Print the support instead of the series.
    #[arg(long)]
    support: bool,
    /// Guess a Mahler-type equation F = A F(x^s) or F = A + F(x^s).
    #[arg(long)]
    guess: bool,
    #[arg(long, default_value_t = 8)]
    s_max: u32,
    #[arg(long, default_value_t = 4)]
    deg_a_max: usize,
    /// Guess a polynomial relation of degree at most this.
    #[arg(long)]
    minpoly: Option<usize>,
    #[arg(long, default_value_t = 2)]
    deg_max: usize,
    /// Verify `multiplicative` or `affine` with `--s` and `--a`.
    #[arg(long)]
    verify: Option<String>,
    #[arg(long)]
    s: Option<usize>,
    /// Comma-separated coefficients of A.
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    /// Series dump format: `sparse` or `binary`.
    #[arg(long, default_value = "sparse")]
    format: String,
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn series_err(e: SeriesError) -> Failure {
    match e {
        SeriesError::TooLarge(_) => Failure::Resource(e.into()),
        e => Failure::Usage(e.into()),
    }
}

fn dl_err(e: DlError) -> Failure {
    match e {
        DlError::Series(s) => series_err(s),
        e => Failure::Usage(e.into()),
    }
}

fn modp_err(e: ModpError) -> Failure {
    match e {
        ModpError::PrecisionExhausted { .. } | ModpError::Io(_) => Failure::Resource(e.into()),
        e => Failure::Usage(e.into()),
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Resource(e.into())
}

fn rational(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).ok_or_else(|| usage(anyhow!("bad rational `{s}`")))
}

fn bigint(s: &str) -> Result<BigInt, Failure> {
    s.parse().map_err(|_| usage(anyhow!("bad integer `{s}`")))
}

fn spec(s: &str) -> Result<HypergeomSpec, Failure> {
    HypergeomSpec::parse(s).map_err(usage)
}

fn looks_like_spec(s: &str) -> bool {
    let t = s.trim();
    t.find('F').is_some_and(|i| i > 0 && t[..i].chars().all(|c| c.is_ascii_digit())) && t.contains('(')
}

pub fn run(cmd: &Command, argv: &[String], out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Expand { expr, order } => {
            let ms = expand_args(expr, *order)?;
            writeln!(out, "{}", SeriesJson::from(&ms).to_json()).map_err(io)
        }
        Command::Diag { expr, order } => {
            let d = expand_args(expr, *order)?.diagonal("x");
            for c in d.coeffs() {
                writeln!(out, "{c}").map_err(io)?;
            }
            Ok(())
        }
        Command::Hadamard { series, order } => {
            let parts = series
                .iter()
                .map(|s| if looks_like_spec(s) { Recipe::Hyp(s.clone()) } else { Recipe::Expr(s.clone()) })
                .collect();
            let f = Recipe::Hadamard(parts).series(*order).map_err(usage)?;
            for c in f.coeffs() {
                writeln!(out, "{c}").map_err(io)?;
            }
            Ok(())
        }
        Command::Hyp { spec: s, order, height: h } => {
            let sp = spec(s)?;
            if *h {
                return writeln!(out, "{}", height(&sp)).map_err(io);
            }
            for c in hyp_series(&sp, *order).map_err(usage)?.coeffs() {
                writeln!(out, "{c}").map_err(io)?;
            }
            Ok(())
        }
        Command::Gb { spec: s, order, c_max, d_max, prime_bound } => {
            let sp = spec(s)?;
            let f = hyp_series(&sp, *order).map_err(usage)?;
            let witness = match globally_bounded_witness(&f, &bigint(c_max)?, &bigint(d_max)?) {
                GbWitness::Found { c, d } => json!({"c": c.to_string(), "d": d.to_string()}),
                GbWitness::NotFoundUpToBounds => serde_json::Value::Null,
            };
            let doc = json!({
                "spec": sp.to_string(),
                "order": order,
                "witness": witness,
                "heuristic": verdict_json(&gb_heuristic(&sp, *order, *prime_bound)),
            });
            writeln!(out, "{doc}").map_err(io)
        }
        Command::Factorize { upper, lower, order } => {
            let u: Vec<Rational> = upper.iter().map(|s| rational(s)).collect::<Result<_, _>>()?;
            let report = hadamard_factorizations(&u[0], &u[1], &u[2], &rational(lower)?, *order);
            for c in &report.cases {
                let line = json!({
                    "decomposition": c.decomposition,
                    "factor": c.factor.to_string(),
                    "verdict": verdict_json(&c.verdict),
                });
                writeln!(out, "{line}").map_err(io)?;
            }
            writeln!(out, "{}", json!({"route_found": report.route_found()})).map_err(io)
        }
        Command::Dl { expr, verify, full } => {
            let e = parse_validated(&expr.expr, &expr.vars).map_err(usage)?;
            eprintln!("building minimal polynomial and rational function");
            let res = dl_full(&e).map_err(dl_err)?;
            writeln!(out, "{}", res.header_json()).map_err(io)?;
            writeln!(out, "r = {}", res.r).map_err(io)?;
            if *full {
                writeln!(out, "R = {}", res.function).map_err(io)?;
            } else {
                let dens: Vec<usize> = res.function.den_factors().iter().map(|d| d.nterms()).collect();
                let doc = json!({"vars": res.function.vars(), "numerator_terms": res.function.num().nterms(), "denominator_terms": dens});
                writeln!(out, "{doc}").map_err(io)?;
            }
            if let Some(n) = verify {
                eprintln!("comparing diagonals through {n}");
                let want = expand(&e, &vec![*n; e.vars().len()]).map_err(series_err)?.diagonal("x");
                let got = res.full_diagonal(*n).map_err(series_err)?;
                for c in got.coeffs() {
                    writeln!(out, "{c}").map_err(io)?;
                }
                if let Some(i) = want.first_difference(&got) {
                    return Err(Failure::Mismatch(format!("diagonals differ at index {i}")));
                }
            }
            Ok(())
        }
        Command::DlFixture { family, order } => {
            let (a, b) = (u32::try_from(family.a).map_err(usage)?, u32::try_from(family.b).map_err(usage)?);
            let cmp = compare_fixture(a, b, *order).map_err(dl_err)?;
            writeln!(out, "{}", serde_json::to_string(&cmp).expect("serializable")).map_err(io)?;
            match cmp.first_mismatch {
                Some(i) => Err(Failure::Mismatch(format!("fixture diagonal differs from S(n) at index {i}"))),
                None => Ok(()),
            }
        }
        Command::FamilyCheck { pairs, order } => {
            for pair in pairs {
                let (a, b) = pair
                    .split_once('/')
                    .and_then(|(a, b)| Some((a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?)))
                    .ok_or_else(|| usage(anyhow!("bad pair `{pair}`, expected a/b")))?;
                let f = hyp_series(&family_spec(a, b).map_err(usage)?, *order as usize).map_err(usage)?;
                for n in 0..=*order {
                    let s = closed_form_s(a, b, n).map_err(usage)?;
                    if coefficient_sum_oracle(a, b, n) != s || f.coeff(n as usize) != s {
                        return Err(Failure::Mismatch(format!("({a}, {b}) disagree at n = {n}")));
                    }
                }
                let values: Vec<String> = (1..=2).map(|n| f.coeff(n).to_string()).collect();
                writeln!(
                    out,
                    "{}",
                    json!({"a": a, "b": b, "order": order, "agree": true, "s1": values[0], "s2": values[1]})
                )
                .map_err(io)?;
            }
            Ok(())
        }
        Command::OdeCheck { family, order } => {
            let ode = ode_family(family.a, family.b).map_err(usage)?;
            let f = hyp_series(&family_spec(family.a, family.b).map_err(usage)?, *order).map_err(usage)?;
            let res = ode_apply(&ode, &f).map_err(usage)?;
            writeln!(out, "{ode}").map_err(io)?;
            if !res.is_zero() {
                return Err(Failure::Mismatch(format!("residual {res}")));
            }
            writeln!(out, "annihilates through degree {}", res.order()).map_err(io)
        }
        Command::RecuCheck { a, b, order } => {
            let ok = recurrence_verify_symbolic();
            writeln!(out, "symbolic: {ok}").map_err(io)?;
            if !ok {
                return Err(Failure::Mismatch("recurrence is not a polynomial identity".into()));
            }
            if let (Some(a), Some(b)) = (a, b) {
                let s: Vec<Rational> = (0..=*order as u64 + 1)
                    .map(|n| closed_form_s(*a, *b, n))
                    .collect::<Result<_, _>>()
                    .map_err(usage)?;
                let res = family_recurrence().residuals("n", &[("a", int(*a)), ("b", int(*b))], &s);
                if let Some(n) = res.iter().position(|r| r != &int(0)) {
                    return Err(Failure::Mismatch(format!("residual at n = {n}")));
                }
                writeln!(out, "holds for (a, b) = ({a}, {b}), n <= {order}").map_err(io)?;
            }
            Ok(())
        }
        Command::Zeilberger { summand, a, b, max_order, verify } => {
            let (term, width): (HyperTerm, i64) = match summand.as_str() {
                "binomial" => (HyperTerm::new(vec![(Factor::Binom(Lin::n(), Lin::k()), 1)]), 1),
                "binomial-squared" => (HyperTerm::new(vec![(Factor::Binom(Lin::n(), Lin::k()), 2)]), 1),
                "family" => (family_summand(*a, *b, true), 2),
                other => return Err(usage(anyhow!("unknown summand `{other}`"))),
            };
            let tel = zeilberger(&term, *max_order).map_err(usage)?;
            let doc = json!({"recurrence": tel.to_strings(), "certificate": tel.certificate.to_string()});
            writeln!(out, "{doc}").map_err(io)?;
            let grid_n = (*verify).min(8);
            let grid = pole_free_grid(&tel, grid_n, 0, width * grid_n + 2);
            match certificate_verify(&term, &tel, &grid, *verify, |n| (0, width * n)) {
                Ok(true) => Ok(()),
                Ok(false) => Err(Failure::Mismatch("certificate check failed".into())),
                Err(e) => Err(usage(e)),
            }
        }
        Command::Modp(args) => modp(args, out),
        Command::Identities { suite, cases } => identities(suite, cases.as_ref(), argv, out),
    }
}

fn expand_args(expr: &ExprArgs, order: u32) -> Result<diagonals::series::MultiSeries, Failure> {
    let e = parse_validated(&expr.expr, &expr.vars).map_err(usage)?;
    expand(&e, &vec![order; expr.vars.len()]).map_err(series_err)
}

fn verdict_json(v: &GbVerdict) -> serde_json::Value {
    match v {
        GbVerdict::LikelyBounded => json!({"verdict": "likely_bounded"}),
        GbVerdict::LikelyUnbounded { primes, first_index } => {
            json!({"verdict": "likely_unbounded", "primes": primes, "first_index": first_index})
        }
    }
}

fn modp(args: &ModpArgs, out: &mut dyn Write) -> Outcome {
    let sp = spec(&args.spec)?;
    eprintln!("computing {} coefficients modulo {}^{}", args.n + 1, args.p, args.r);
    let k = args.precision.unwrap_or(args.r).max(args.r);
    let mut f = hyp_series_mod_precision(&sp, args.p, args.r, k, args.n).map_err(modp_err)?;
    if let Some(c) = args.lift_scale {
        f = f.drop_constant_div_p().ok_or_else(|| Failure::Mismatch("F - F(0) is not divisible by p".into()))?.scale(c);
    }
    let mut did = false;
    if args.support {
        let s: Vec<String> = f.support().iter().map(|i| i.to_string()).collect();
        writeln!(out, "{}", s.join(" ")).map_err(io)?;
        did = true;
    }
    if let Some(kind) = &args.verify {
        let s = args.s.ok_or_else(|| usage(anyhow!("--verify needs --s")))?;
        let a = args.a.clone();
        let kind = match kind.as_str() {
            "multiplicative" => EqKind::Multiplicative { s, a },
            "affine" => EqKind::Affine { s, a },
            other => return Err(usage(anyhow!("unknown relation kind `{other}`"))),
        };
        let eq = FunctionalEq { p: f.p(), r: f.r(), kind };
        match verify_relation(&f, &eq, f.degree()) {
            RelationCheck::Holds => writeln!(out, "holds: {eq} through degree {}", f.degree()).map_err(io)?,
            RelationCheck::FailsAt(i) => return Err(Failure::Mismatch(format!("{eq} fails at degree {i}"))),
        }
        did = true;
    }
    if args.guess {
        eprintln!("guessing on {} coefficients, verifying on {}", f.len() / 2, f.len());
        let eq = guess_mahler(&f, args.s_max, args.deg_a_max)
            .ok_or_else(|| Failure::Mismatch("no Mahler-type relation within the bounds".into()))?;
        writeln!(out, "{}", eq.summary()).map_err(io)?;
        writeln!(out, "{eq}").map_err(io)?;
        did = true;
    }
    if let Some(d) = args.minpoly {
        let eq = guess_minpoly_mod(&f, d, args.deg_max)
            .ok_or_else(|| Failure::Mismatch("no polynomial relation within the bounds".into()))?;
        writeln!(out, "{eq}").map_err(io)?;
        did = true;
    }
    if !did {
        match args.format.as_str() {
            "sparse" => write_sparse_text(&f, out).map_err(modp_err)?,
            "binary" => write_binary(&f, out).map_err(modp_err)?,
            other => return Err(usage(anyhow!("unknown format `{other}`"))),
        }
    }
    Ok(())
}

fn identities(suite: &str, cases: Option<&PathBuf>, argv: &[String], out: &mut dyn Write) -> Outcome {
    let cases: Vec<IdentityCase> = match cases {
        Some(path) => {
            let f = File::open(path).map_err(io)?;
            serde_json::from_reader(BufReader::new(f)).map_err(usage)?
        }
        None if suite == "builtin" => builtin_suite(),
        None => return Err(usage(anyhow!("unknown suite `{suite}`"))),
    };
    eprintln!("running {} cases", cases.len());
    writeln!(out, "{}", json!({"command": argv, "version": diagonals::VERSION})).map_err(io)?;
    let reports = run_suite(&cases);
    let mut failed = vec![];
    for r in &reports {
        writeln!(out, "{}", r.to_json_line()).map_err(io)?;
        if r.status == Status::Error || (r.proven && !r.is_match()) {
            failed.push(r.name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("failing cases: {}", failed.join(", "))))
    }
}
