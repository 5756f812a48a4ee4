//! Subcommands and their JSON results.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use robba_core::rational::{ceil_to_i64, fmt_q, parse_q};
use robba_core::tate::{
    afg_witness, munshi_descent, norm_bounded_divide, DescentState, DivideOptions, LaurentDomain, PadicRationals,
    TateAlgebra, TatePoly, Weight,
};
use robba_core::{
    classify, covering_check, eval_beta5, eval_h, factor_linear, persistence_interval, rational_subset_member,
    same_point, stable_presentation, CoeffElem, GammaValue, NormExp, PointDescriptor, Radius, RationalSubset, Ring,
    RobbaElem, Sign, Q,
};
use serde_json::{json, Value};

use crate::eval::{parse_coeff, parse_robba, parse_tate, parse_witt, EvalError, TateLiterals};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "robba", version, about = "Norms, points and ideals over Robba rings and Tate algebras")]
pub struct Cli {
    /// Flat TOML session configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Emit compact single-line JSON instead of indented JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Default t-adic precision `a/b`.
    #[arg(long = "prec-t", global = true, value_name = "A/B")]
    pub prec_t: Option<String>,
    /// Working w-adic precision.
    #[arg(long = "prec-w", global = true, value_name = "N")]
    pub prec_w: Option<usize>,
    /// `equalchar` or `mixed`.
    #[arg(long, global = true)]
    pub backend: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// H(u, r)(x) at a type 1-3 point, or the type-5 value.
    EvalNorm {
        #[arg(long)]
        point: String,
        #[arg(long)]
        elem: String,
    },
    /// Stable presentation x = sum x_i (w - [u])^i.
    StablePres {
        #[arg(long)]
        center: String,
        #[arg(long)]
        elem: String,
        /// Presentation depth; defaults to the working precision.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Type of a point descriptor.
    Classify {
        #[arg(long)]
        point: String,
    },
    /// Whether two centers define the same point at radius rho.
    SamePoint {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        rho: String,
    },
    /// Factor x = y * prod (w - [u_j]) with y stable.
    Factor {
        #[arg(long)]
        elem: String,
    },
    /// Interval on which beta(x) <= beta(y) persists to rank-1 points.
    PersistInterval {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        center: String,
        #[arg(long)]
        rho: String,
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
    },
    /// Membership of a point in the rational subset {|f_i| <= |g|}.
    Member {
        #[arg(long)]
        point: String,
        #[arg(long = "f", required = true)]
        fs: Vec<String>,
        #[arg(long)]
        g: String,
    },
    /// Whether sample points are covered by rational subsets.
    CoverCheck {
        /// `{"fs": [...], "g": "..."}`; repeatable.
        #[arg(long = "subset", required = true)]
        subsets: Vec<String>,
        /// Point descriptor; repeatable.
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Descent c + varpi x -> c' + varpi x' in an ideal.
    IdealReduce {
        #[command(flatten)]
        tate: TateArgs,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "1")]
        c: String,
        /// Defaults to the uniformizer of the coefficient domain.
        #[arg(long)]
        varpi: Option<String>,
        /// Reach |psi(x')| <= p^-target |psi(x)|.
        #[arg(long, default_value = "1")]
        target: String,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Norm-bounded division of y by generators.
    Divide {
        #[command(flatten)]
        tate: TateArgs,
        #[arg(long)]
        y: String,
        /// Only divide by generators of norm at least the term's.
        #[arg(long)]
        integral: bool,
        #[arg(long)]
        cutoff: Option<String>,
    },
    /// Witness that an ideal is almost finitely generated.
    AfgWitness {
        #[command(flatten)]
        tate: TateArgs,
        /// Norm exponent of the element u.
        #[arg(long = "u-exp", default_value = "1")]
        u_exp: String,
        #[arg(long, default_value_t = 200)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct TateArgs {
    /// Generator; repeatable.
    #[arg(long = "gen")]
    pub gens: Vec<String>,
    /// Comma-separated weight exponents rho_i (|T_i| = p^-rho_i); a name
    /// such as `~r` stands for a weight outside the value group.
    #[arg(long)]
    pub weights: Option<String>,
    /// `laurent` (coefficients in L, the default) or `padic` (rationals with
    /// the p-adic norm).
    #[arg(long)]
    pub domain: Option<String>,
    /// JSON ideal description; flags given alongside it take precedence.
    #[arg(long, value_name = "PATH")]
    pub fixture: Option<PathBuf>,
}

/// An ideal after merging `--fixture` with the flags.
struct IdealSpec {
    weights: Vec<Weight>,
    gens: Vec<String>,
    domain: String,
}

/// Weights, generator sources and domain as written in a fixture.
type RawIdeal = (Vec<String>, Vec<String>, Option<String>);

/// Reads `{"weights": ["0", "1/2"], "generators": [...], "domain": "laurent"}`.
/// A generator is either an expression string or a list of terms
/// `{"coeff": "<expr>", "exp": [e_1, ..., e_n]}`.
fn read_fixture(path: &std::path::Path) -> Result<RawIdeal, CliError> {
    let arg = "--fixture";
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError { exit: 4, ..bad_arg(arg, format!("cannot read {}: {e}", path.display())) })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError {
        code: "parse_error".into(),
        message: format!("fixture: {e}"),
        location: Some(Box::new(json!({ "arg": arg, "line": e.line(), "column": e.column() }))),
        exit: 2,
    })?;
    let list = |key: &str| -> Result<Vec<Value>, CliError> {
        match v.get(key) {
            Some(Value::Array(a)) => Ok(a.clone()),
            Some(_) => Err(bad_arg(arg, format!("\"{key}\" must be an array"))),
            None => Ok(Vec::new()),
        }
    };
    let scalar = |x: &Value, what: &str| match x {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(bad_arg(arg, format!("{what} must be a string or a number"))),
    };
    let weights = list("weights")?.iter().map(|w| scalar(w, "a weight")).collect::<Result<Vec<_>, _>>()?;
    let mut gens = Vec::new();
    for g in list("generators")? {
        match g {
            Value::String(s) => gens.push(s),
            Value::Array(terms) => {
                let mut parts = Vec::new();
                for term in &terms {
                    let coeff = scalar(term.get("coeff").unwrap_or(&Value::Null), "\"coeff\"")?;
                    let mut part = format!("({coeff})");
                    let exps = term.get("exp").and_then(Value::as_array).map(Vec::as_slice).unwrap_or_default();
                    for (i, e) in exps.iter().enumerate() {
                        match e.as_u64() {
                            Some(0) => {}
                            Some(k) => part.push_str(&format!("*T{}^{k}", i + 1)),
                            None => return Err(bad_arg(arg, "exponents must be non-negative integers")),
                        }
                    }
                    parts.push(part);
                }
                gens.push(if parts.is_empty() { "0".into() } else { parts.join(" + ") });
            }
            _ => return Err(bad_arg(arg, "a generator is a string or a list of terms")),
        }
    }
    let domain = v.get("domain").and_then(Value::as_str).map(str::to_string);
    Ok((weights, gens, domain))
}

impl TateArgs {
    fn resolve(&self) -> Result<IdealSpec, CliError> {
        let (mut weights, mut gens, mut domain) = match &self.fixture {
            Some(path) => read_fixture(path)?,
            None => (Vec::new(), Vec::new(), None),
        };
        if let Some(w) = &self.weights {
            weights = w.split(',').map(|s| s.trim().to_string()).collect();
        }
        if weights.is_empty() {
            return Err(bad_arg("--weights", "no weights given"));
        }
        gens.extend(self.gens.iter().cloned());
        if gens.is_empty() {
            return Err(bad_arg("--gen", "no generators given; pass --gen or --fixture"));
        }
        if self.domain.is_some() {
            domain = self.domain.clone();
        }
        Ok(IdealSpec { weights: parse_weights(&weights)?, gens, domain: domain.unwrap_or_else(|| "laurent".into()) })
    }
}

// ------------------------------------------------------------------ helpers

fn input_err(arg: &str, e: EvalError) -> CliError {
    CliError {
        code: if e.syntax { "parse_error" } else { "semantic_error" }.into(),
        message: e.message,
        location: Some(Box::new(json!({ "arg": arg, "offset": e.offset }))),
        exit: 2,
    }
}

fn bad_arg(arg: &str, message: impl Into<String>) -> CliError {
    CliError {
        code: "parse_error".into(),
        message: message.into(),
        location: Some(Box::new(json!({ "arg": arg }))),
        exit: 2,
    }
}

fn rational(arg: &str, s: &str) -> Result<Q, CliError> {
    parse_q(s).ok_or_else(|| bad_arg(arg, format!("'{s}' is not a rational a/b")))
}

pub fn q_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn opt_q_json(x: &Option<Q>) -> Value {
    x.as_ref().map_or(Value::Null, q_json)
}

pub fn norm_json(n: &NormExp) -> Value {
    match n {
        NormExp::Exact(e) => q_json(e),
        NormExp::Below(b) => json!({ "below": fmt_q(b) }),
    }
}

fn gamma_json(g: &GammaValue) -> Value {
    if g.zero {
        Value::String("0".into())
    } else {
        json!({ "e": fmt_q(&g.e), "k": g.k })
    }
}

fn coeff_str(x: &CoeffElem) -> String {
    x.format(false)
}

fn field_of(v: &Value, key: &str, arg: &str) -> Result<String, CliError> {
    match v.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Number(n)) => Ok(n.to_string()),
        Some(_) => Err(bad_arg(arg, format!("\"{key}\" must be a string"))),
        None => Err(bad_arg(arg, format!("missing \"{key}\""))),
    }
}

fn center(ring: &Arc<Ring>, arg: &str, s: &str) -> Result<CoeffElem, CliError> {
    parse_coeff(s, ring.field()).map_err(|e| input_err(arg, e))
}

fn radius(arg: &str, s: &str) -> Result<Radius, CliError> {
    Radius::parse(s).ok_or_else(|| bad_arg(arg, format!("radius '{s}' is neither a rational nor inf")))
}

/// `{"type": "center"|"type4"|"type5", "center": ..., "rho": ..., "sign": ..., "discs": [...]}`.
pub fn point_from_json(ring: &Arc<Ring>, arg: &str, src: &str) -> Result<PointDescriptor, CliError> {
    let v: Value = serde_json::from_str(src).map_err(|e| CliError {
        code: "parse_error".into(),
        message: format!("point descriptor: {e}"),
        location: Some(Box::new(json!({ "arg": arg, "line": e.line(), "column": e.column() }))),
        exit: 2,
    })?;
    let kind = match v.get("type").and_then(Value::as_str) {
        Some(k) => k.to_string(),
        None if v.get("discs").is_some() => "type4".into(),
        None if v.get("sign").is_some() => "type5".into(),
        None => "center".into(),
    };
    match kind.as_str() {
        "center" | "1" | "2" | "3" => Ok(PointDescriptor::Center {
            u: center(ring, arg, &field_of(&v, "center", arg)?)?,
            radius: radius(arg, &field_of(&v, "rho", arg)?)?,
        }),
        "type5" | "5" => {
            let sign = field_of(&v, "sign", arg)?;
            Ok(PointDescriptor::Type5 {
                u: center(ring, arg, &field_of(&v, "center", arg)?)?,
                rho: rational(arg, &field_of(&v, "rho", arg)?)?,
                sign: Sign::parse(&sign).ok_or_else(|| bad_arg(arg, format!("sign '{sign}' is not + or -")))?,
            })
        }
        "type4" | "4" => {
            let discs = v
                .get("discs")
                .and_then(Value::as_array)
                .ok_or_else(|| bad_arg(arg, "type-4 descriptors need a \"discs\" array"))?;
            let discs = discs
                .iter()
                .map(|d| {
                    Ok((center(ring, arg, &field_of(d, "center", arg)?)?, rational(arg, &field_of(d, "rho", arg)?)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(PointDescriptor::Type4Prefix { discs })
        }
        other => Err(bad_arg(arg, format!("unknown point type '{other}'"))),
    }
}

fn robba(ring: &Arc<Ring>, arg: &str, s: &str) -> Result<RobbaElem, CliError> {
    parse_robba(s, ring).map_err(|e| input_err(arg, e))
}

fn subset_from_json(ring: &Arc<Ring>, src: &str) -> Result<RationalSubset, CliError> {
    let arg = "--subset";
    let v: Value = serde_json::from_str(src).map_err(|e| bad_arg(arg, format!("subset: {e}")))?;
    let fs = v
        .get("fs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad_arg(arg, "subsets need an \"fs\" array"))?
        .iter()
        .map(|f| match f.as_str() {
            Some(s) => robba(ring, arg, s),
            None => Err(bad_arg(arg, "entries of \"fs\" must be strings")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = robba(ring, arg, &field_of(&v, "g", arg)?)?;
    Ok(RationalSubset::new(fs, g))
}

// ------------------------------------------------------------------ dispatch

pub fn dispatch(ring: &Arc<Ring>, cmd: &Command) -> Result<Value, CliError> {
    match cmd {
        Command::EvalNorm { point, elem } => {
            let d = point_from_json(ring, "--point", point)?;
            let x = robba(ring, "--elem", elem)?;
            match d {
                PointDescriptor::Center { u, radius } => {
                    Ok(json!({ "norm_exp": norm_json(&eval_h(&u, &radius, &x)?) }))
                }
                PointDescriptor::Type5 { u, rho, sign } => {
                    let v = eval_beta5(&u, rho, sign, &x)?;
                    Ok(json!({
                        "value": gamma_json(&v.value),
                        "level": v.level,
                        "coincides_with_rank1": v.coincides_with_rank1,
                    }))
                }
                PointDescriptor::Type4Prefix { .. } => Err(robba_core::error::Error::Precondition(
                    "a finite type-4 prefix does not determine norms; evaluate at one of its discs".into(),
                )
                .into()),
            }
        }
        Command::StablePres { center: c, elem, depth } => {
            let u = center(ring, "--center", c)?;
            let x = parse_witt(elem, ring).map_err(|e| input_err("--elem", e))?;
            let pres = stable_presentation(&x, &u, depth.unwrap_or(ring.wprec()))?;
            Ok(json!({
                "entries": pres.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "remainder": pres.remainder.to_string(),
                "reconstructs": pres.reconstruct()?.approx_eq(&x),
            }))
        }
        Command::Classify { point } => {
            let d = point_from_json(ring, "--point", point)?;
            Ok(json!({ "type": classify(ring, &d)?.number() }))
        }
        Command::SamePoint { u, v, rho } => {
            let a = center(ring, "--u", u)?;
            let b = center(ring, "--v", v)?;
            Ok(json!({ "same": same_point(ring, &a, &b, &radius("--rho", rho)?)? }))
        }
        Command::Factor { elem } => {
            let x = parse_witt(elem, ring).map_err(|e| input_err("--elem", e))?;
            let f = factor_linear(&x)?;
            Ok(json!({
                "roots": f.roots.iter().map(coeff_str).collect::<Vec<_>>(),
                "unit": f.y.to_string(),
                "reassembles": f.reassemble()?.approx_eq(&x),
            }))
        }
        Command::PersistInterval { x, y, center: c, rho, sign } => {
            let x = robba(ring, "--x", x)?;
            let y = robba(ring, "--y", y)?;
            let u = center(ring, "--center", c)?;
            let sign = Sign::parse(sign).ok_or_else(|| bad_arg("--sign", format!("sign '{sign}' is not + or -")))?;
            let s = persistence_interval(&x, &y, &u, rational("--rho", rho)?, sign)?;
            Ok(json!({ "s": q_json(&s) }))
        }
        Command::Member { point, fs, g } => {
            let d = point_from_json(ring, "--point", point)?;
            let fs = fs.iter().map(|f| robba(ring, "--f", f)).collect::<Result<Vec<_>, _>>()?;
            let g = robba(ring, "--g", g)?;
            Ok(json!({ "member": rational_subset_member(&d, &fs, &g)? }))
        }
        Command::CoverCheck { subsets, points } => {
            let subsets = subsets.iter().map(|s| subset_from_json(ring, s)).collect::<Result<Vec<_>, _>>()?;
            let points = points.iter().map(|p| point_from_json(ring, "--point", p)).collect::<Result<Vec<_>, _>>()?;
            let report = covering_check(&subsets, &points);
            let membership: Vec<Vec<Value>> = report
                .membership
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|r| match r {
                            Ok(b) => Value::Bool(*b),
                            Err(e) => json!({ "error": e.code() }),
                        })
                        .collect()
                })
                .collect();
            Ok(json!({
                "covers": report.covers(),
                "membership": membership,
                "uncovered": report.uncovered,
                "undecided": report.undecided,
            }))
        }
        Command::IdealReduce { tate, .. } | Command::Divide { tate, .. } | Command::AfgWitness { tate, .. } => {
            let ideal = tate.resolve()?;
            match ideal.domain.as_str() {
                "laurent" => {
                    let alg = TateAlgebra::new(LaurentDomain::new(ring.field().clone()), ideal.weights)?;
                    tate_command(&alg, &ideal.gens, cmd)
                }
                "padic" => {
                    let cutoff = ceil_to_i64(&(ring.field().default_tprec() * ring.field().t_exponent()));
                    let d = PadicRationals::new(ring.field().p(), cutoff)?;
                    tate_command(&TateAlgebra::new(d, ideal.weights)?, &ideal.gens, cmd)
                }
                other => Err(bad_arg("--domain", format!("unknown domain '{other}', expected laurent or padic"))),
            }
        }
    }
}

fn parse_weights(ws: &[String]) -> Result<Vec<Weight>, CliError> {
    ws.iter()
        .map(|w| {
            let w = w.trim();
            if let Some(name) = w.strip_prefix('~') {
                Ok(Weight::Irrational(name.to_string()))
            } else {
                rational("--weights", w).map(Weight::Rational)
            }
        })
        .collect()
}

fn tate_command<D: TateLiterals>(
    alg: &Arc<TateAlgebra<D>>,
    gen_src: &[String],
    cmd: &Command,
) -> Result<Value, CliError> {
    let poly = |arg: &str, s: &str| parse_tate(s, alg).map_err(|e| input_err(arg, e));
    let gens = gen_src.iter().map(|g| poly("--gen", g)).collect::<Result<Vec<_>, _>>()?;
    let fmt_all = |ps: &[TatePoly<D>]| ps.iter().map(TatePoly::format).collect::<Vec<_>>();
    let constant = |arg: &str, s: &str| -> Result<D::Elem, CliError> {
        let p = poly(arg, s)?;
        if p.terms().keys().all(|i| i.is_zero()) {
            Ok(p.constant_term())
        } else {
            Err(bad_arg(arg, format!("'{s}' must be a constant")))
        }
    };
    match cmd {
        Command::IdealReduce { x, c, varpi, target, eps, .. } => {
            let d = alg.domain();
            let varpi = match varpi {
                Some(v) => constant("--varpi", v)?,
                None => d.varpi(),
            };
            let eps = eps.as_deref().map(|e| rational("--eps", e)).transpose()?;
            let st = DescentState::new(&gens, varpi, constant("--c", c)?, poly("--x", x)?, eps)?;
            let out = munshi_descent(&st, rational("--target", target)?)?;
            Ok(json!({
                "c": d.format(&out.c),
                "x": out.x.format(),
                "eps_exp": opt_q_json(&st.eps_exp()),
                "rounds": out.rounds.iter().map(|r| json!({
                    "psi_before": opt_q_json(&r.psi_before),
                    "psi_after": opt_q_json(&r.psi_after),
                    "steps": r.steps,
                })).collect::<Vec<_>>(),
                "certificate_verified": out.state.verify_membership(),
            }))
        }
        Command::Divide { y, integral, cutoff, .. } => {
            let y = poly("--y", y)?;
            let opts = DivideOptions {
                integral: *integral,
                cutoff: cutoff.as_deref().map(|c| rational("--cutoff", c)).transpose()?,
            };
            let div = norm_bounded_divide(&y, &gens, &opts)?;
            Ok(json!({
                "quotients": fmt_all(&div.quotients),
                "remainder": div.remainder.format(),
                "tail": opt_q_json(&div.remainder.tail()),
                "reassembles": div.reassemble(&gens).approx_eq(&y),
            }))
        }
        Command::AfgWitness { u_exp, probes, seed, .. } => {
            let w = afg_witness(&gens, rational("--u-exp", u_exp)?, *probes, *seed)?;
            Ok(json!({
                "m": w.m(),
                "u_exp": q_json(&w.u_exp),
                "base": fmt_all(&w.base),
                "levels": w.levels.iter().map(|l| fmt_all(l)).collect::<Vec<_>>(),
                "probes": probes,
            }))
        }
        _ => unreachable!("only Tate commands reach here"),
    }
}
