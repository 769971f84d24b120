use std::path::PathBuf;

use clap::{Args, Subcommand};
use linv_core::curves::{tate_period, ReductionKind};
use linv_core::measures::{
    build_measure, exceptional_zero_check, search_twist_check, twist_product_check, Conventions, Scalar, UnitRootData,
};
use linv_core::modsym::{build_space, eigen_symbol, Sign};
use linv_core::padic::Padic;
use linv_core::parallel::Exec;
use linv_core::periods::{parse_factors, parse_rational, Base, Branch, FieldSpec, Period};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::config::RunConfig;
use crate::curves::{import, load_table, resolve, Resolved};
use crate::error::CliError;

const DEFAULT_PRECISION: u32 = 20;

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Label in the bundled or imported table, e.g. 11a1.
    #[arg(long, required_unless_present = "curve", conflicts_with = "curve")]
    pub label: Option<String>,
    /// a-invariants `[a1,a2,a3,a4,a6]`.
    #[arg(long)]
    pub curve: Option<String>,
    /// Conductor, checked against the recomputed one.
    #[arg(long)]
    pub conductor: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// L-invariant of a period literal such as "2^3 * (5/3)^-1".
    LiPeriod {
        literal: String,
        #[arg(short)]
        p: u64,
        /// `iwasawa`, `cyclotomic`, `p` (the branch killing p) or a rational direction.
        #[arg(long, default_value = "iwasawa")]
        branch: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Tate period and L-invariant at a multiplicative prime.
    LiCurve {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Compares L_p'(0)/[0] with the Tate L-invariant at a split prime.
    CheckEzc {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Quadratic-twist check; searches for a discriminant when -D is absent.
    CheckTwist {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short)]
        p: u64,
        #[arg(short = 'D', allow_hyphen_values = true)]
        discriminant: Option<i64>,
        /// Search among discriminants with χ_D(p) = -1 instead of +1.
        #[arg(long, conflicts_with = "discriminant")]
        inert: bool,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Stickelberger element at depth n and its leading term.
    Stickelberger {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
        /// Order r of the leading term; defaults to 0 or 1 by the augmentation.
        #[arg(long)]
        order: Option<u32>,
        /// Include every coefficient.
        #[arg(long)]
        table: bool,
    },
    /// Measure, L_p(0) and L_p'(0).
    Lp {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
        #[arg(long)]
        table: bool,
    },
    /// Manin-symbol presentation and Hecke matrices.
    Modsym {
        /// `dump` is accepted and is the only action.
        #[arg(value_enum)]
        action: Option<ModsymAction>,
        #[arg(long)]
        level: u64,
        #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        hecke: Vec<u64>,
    },
    /// The curve table.
    #[command(subcommand)]
    Curves(CurvesCommand),
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ModsymAction {
    Dump,
}

#[derive(Debug, Subcommand)]
pub enum CurvesCommand {
    List,
    /// Validates and merges rows (`label ainvs [N]` or allcurves format).
    Import {
        file: PathBuf,
        #[arg(long)]
        dry_run: bool,
    },
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    Sign::parse(s).map_err(|e| e.to_string())
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LiPeriod { .. } => "li-period",
            Command::LiCurve { .. } => "li-curve",
            Command::CheckEzc { .. } => "check-ezc",
            Command::CheckTwist { .. } => "check-twist",
            Command::Stickelberger { .. } => "stickelberger",
            Command::Lp { .. } => "lp",
            Command::Modsym { .. } => "modsym",
            Command::Curves(CurvesCommand::List) => "curves list",
            Command::Curves(CurvesCommand::Import { .. }) => "curves import",
        }
    }
}

pub struct Outcome {
    pub config: RunConfig,
    pub result: Value,
    pub conventions: Option<Value>,
    pub achieved: Option<i64>,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn curve_conventions(dual: bool) -> Option<Value> {
    Some(to_value(&Conventions::new(dual)))
}

/// `x mod p^N` for integral `x`, in the form `55 mod 125`.
fn residue_string(x: &Padic) -> Option<String> {
    let abs = x.abs_precision();
    if abs <= 0 || x.valuation().is_some_and(|v| v < 0) {
        return None;
    }
    let m = BigInt::from(x.prime()).pow(abs as u32);
    let r = x.to_rational();
    let value = ((r.numer() % &m) + &m) % &m;
    Some(format!("{value} mod {m}"))
}

fn parse_branch(s: &str, p: u64) -> Result<Branch, CliError> {
    Ok(match s {
        "iwasawa" => Branch::Iwasawa,
        "cyclotomic" => Branch::Cyclotomic,
        "p" => Branch::Element(Base::int(p as i64)),
        other => Branch::Element(Base::Rational(parse_rational(other)?)),
    })
}

pub struct Runner<'a> {
    pub cache: &'a mut Cache,
    pub base: RunConfig,
}

impl Runner<'_> {
    fn exec(&self) -> Exec {
        if self.base.parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    fn curve_config(
        &self,
        name: &str,
        r: &Resolved,
        p: u64,
        prec: u32,
        depth: Option<u32>,
    ) -> Result<RunConfig, CliError> {
        let mut c = self.base.clone();
        c.command = name.into();
        c.curve = Some(r.name.clone());
        c.p = Some(p);
        c.precision = Some(prec);
        c.depth = depth;
        c.validate()?;
        Ok(c)
    }

    fn resolve(&self, args: &CurveArgs) -> Result<Resolved, CliError> {
        let table = load_table(self.cache.dir())?;
        resolve(&table, args.label.as_deref(), args.curve.as_deref(), args.conductor)
    }

    pub fn run(&mut self, cmd: &Command) -> Result<Outcome, CliError> {
        let name = cmd.name();
        match cmd {
            Command::LiPeriod { literal, p, branch, prec } => {
                let mut config = self.base.clone();
                config.command = name.into();
                config.p = Some(*p);
                config.precision = Some(*prec);
                if !linv_core::arith::is_prime(*p) {
                    return Err(CliError::Config(format!("p = {p} is not prime")));
                }
                if *prec == 0 {
                    return Err(CliError::Config("precision must be positive".into()));
                }
                let branch_spec = parse_branch(branch, *p)?;
                let period = Period::new(FieldSpec::qp(*p), parse_factors(literal)?)?;
                let li = period.li(&branch_spec, *prec)?;
                Ok(Outcome {
                    config,
                    result: json!({
                        "period": to_value(&period.to_json()),
                        "branch": branch,
                        "l_invariant": to_value(&li.to_json()),
                        "residue": residue_string(&li),
                    }),
                    conventions: Some(json!({
                        "l_invariant": "lambda(q) / ord_p(q)",
                        "logarithm": "iwasawa: log(p) = 0; x: log_x(x) = 0; cyclotomic: log_p of the norm",
                    })),
                    achieved: Some(li.abs_precision()),
                })
            }
            Command::LiCurve { curve, p, prec } => {
                let r = self.resolve(curve)?;
                let config = self.curve_config(name, &r, *p, *prec, None)?;
                self.cache.load_j()?;
                let tp = tate_period(&r.curve, *p, *prec)?;
                let li = tp.li(&Branch::Iwasawa)?;
                self.cache.store_j()?;
                Ok(Outcome {
                    config,
                    result: json!({
                        "curve": r.name,
                        "conductor": r.conductor,
                        "tate_period": to_value(&tp.to_json()),
                        "l_invariant": to_value(&li.to_json()),
                        "split": tp.kind == ReductionKind::SplitMultiplicative,
                    }),
                    conventions: curve_conventions(self.base.dual),
                    achieved: Some(li.abs_precision()),
                })
            }
            Command::CheckEzc { curve, p, depth, prec } => {
                let r = self.resolve(curve)?;
                let config = self.curve_config(name, &r, *p, *prec, Some(*depth))?;
                self.cache.load_j()?;
                self.cache.ensure_space(r.conductor, Sign::Plus)?;
                let rep =
                    exceptional_zero_check(&r.curve, r.conductor, *p, *depth, *prec, self.base.dual, self.exec())?;
                self.cache.store_j()?;
                Ok(Outcome {
                    config,
                    conventions: Some(to_value(&rep.conventions)),
                    achieved: Some(rep.provable_digits),
                    result: to_value(&rep),
                })
            }
            Command::CheckTwist { curve, p, discriminant, inert, depth, prec } => {
                let r = self.resolve(curve)?;
                let config = self.curve_config(name, &r, *p, *prec, Some(*depth))?;
                self.cache.load_j()?;
                self.cache.ensure_space(r.conductor, Sign::Plus)?;
                let rep = match discriminant {
                    Some(d) => twist_product_check(&r.curve, r.conductor, *d, *p, *depth, *prec, self.exec())?,
                    None => search_twist_check(&r.curve, r.conductor, *p, !inert, *depth, *prec, self.exec())?,
                };
                // persist the twist's space, already built in memory
                self.cache.ensure_space(rep.twist_conductor, Sign::Plus)?;
                self.cache.store_j()?;
                Ok(Outcome {
                    config,
                    conventions: Some(to_value(&rep.conventions)),
                    achieved: rep.twist_agreement,
                    result: to_value(&rep),
                })
            }
            Command::Stickelberger { curve, p, depth, prec, order, table } => {
                let r = self.resolve(curve)?;
                let config = self.curve_config(name, &r, *p, *prec, Some(*depth))?;
                self.cache.ensure_space(r.conductor, Sign::Plus)?;
                let symbol = eigen_symbol(&r.curve, r.conductor, Sign::Plus)?;
                let unit_root = UnitRootData::new(&r.curve, *p, *prec)?;
                let m = build_measure(&symbol, &unit_root, *depth, *prec, self.exec())?;
                let mut theta = m.stickelberger();
                if self.base.dual {
                    theta = theta.dual();
                }
                let aug = theta.augmentation();
                let r_order = order.unwrap_or(if aug.is_exact_zero() { 1 } else { 0 });
                let leading = if r_order == 0 {
                    json!({ "r": 0, "value": aug.to_json() })
                } else {
                    let lt = theta.leading_term(r_order, self.exec())?;
                    // the depth certifies the first moment only to this many digits
                    let value = if r_order == 1 {
                        lt.value.truncate_abs(m.provable_derivative_digits().min(lt.value.abs_precision()))
                    } else {
                        lt.value
                    };
                    json!({
                        "r": lt.r,
                        "value": value.to_json(),
                        "group_element": lt.group_element.map(|(d, g)| json!({"denominator": d.to_string(), "element": g})),
                    })
                };
                let mut st = to_value(&theta.to_json());
                if !table {
                    st.as_object_mut().expect("object").remove("coefficients");
                }
                Ok(Outcome {
                    config,
                    result: json!({
                        "curve": r.name,
                        "conductor": r.conductor,
                        "measure": to_value(&m.to_json(false)),
                        "stickelberger": st,
                        "leading_term": leading,
                    }),
                    conventions: curve_conventions(self.base.dual),
                    achieved: None,
                })
            }
            Command::Lp { curve, p, depth, prec, table } => {
                let r = self.resolve(curve)?;
                let config = self.curve_config(name, &r, *p, *prec, Some(*depth))?;
                self.cache.ensure_space(r.conductor, Sign::Plus)?;
                let symbol = eigen_symbol(&r.curve, r.conductor, Sign::Plus)?;
                let unit_root = UnitRootData::new(&r.curve, *p, *prec)?;
                let m = build_measure(&symbol, &unit_root, *depth, *prec, self.exec())?;
                let lp = m.lp_value_and_derivative(self.exec())?;
                let value = match &lp.value {
                    Scalar::Exact(q) => json!({ "exact": q.to_string() }),
                    other => to_value(&other.to_json()),
                };
                Ok(Outcome {
                    config,
                    result: json!({
                        "curve": r.name,
                        "conductor": r.conductor,
                        "value_at_zero": m.value_at_zero.to_string(),
                        "measure": to_value(&m.to_json(*table)),
                        "lp_value": value,
                        "lp_derivative": to_value(&lp.derivative.to_json()),
                        "provable_digits": lp.provable_digits,
                    }),
                    conventions: curve_conventions(self.base.dual),
                    achieved: Some(lp.provable_digits),
                })
            }
            Command::Modsym { level, sign, hecke, .. } => {
                let mut config = self.base.clone();
                config.command = name.into();
                config.sign = Some(*sign);
                if *level < 2 {
                    return Err(CliError::Config(format!("level {level} is below 2")));
                }
                if let Some(l) = hecke.iter().find(|l| !linv_core::arith::is_prime(**l)) {
                    return Err(CliError::Config(format!("T_{l}: {l} is not prime")));
                }
                self.cache.ensure_space(*level, *sign)?;
                let space = build_space(*level, *sign)?;
                Ok(Outcome {
                    config,
                    result: to_value(&space.to_json(hecke)),
                    conventions: Some(json!({
                        "manin_symbols": "(c:d) in P^1(Z/N) <-> g{0, oo}, g = [[a, b], [c, d]]",
                        "sign": "quotient by (1 - sign * star)",
                    })),
                    achieved: None,
                })
            }
            Command::Curves(sub) => {
                let mut config = self.base.clone();
                config.command = name.into();
                let rows = match sub {
                    CurvesCommand::List => load_table(self.cache.dir())?.entries().to_vec(),
                    CurvesCommand::Import { file, dry_run } => {
                        let text = std::fs::read_to_string(file)?;
                        import(self.cache.dir(), &text, *dry_run)?
                    }
                };
                let mut curves = Vec::new();
                for e in &rows {
                    let mut bad = Vec::new();
                    for p in e.curve.bad_primes() {
                        bad.push(to_value(&e.curve.reduction_type(p)?));
                    }
                    curves.push(json!({
                        "label": e.label,
                        "ainvs": e.curve.to_string(),
                        "conductor": e.conductor,
                        "discriminant": e.curve.discriminant().to_string(),
                        "j": e.curve.j_invariant().to_string(),
                        "bad_primes": bad,
                    }));
                }
                Ok(Outcome { config, result: json!({ "curves": curves }), conventions: None, achieved: None })
            }
        }
    }
}
