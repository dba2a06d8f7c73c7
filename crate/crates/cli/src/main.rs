mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{float, Format, Report, Style};
use xifree::asymptotics;
use xifree::census::closed::{closed_form, ClosedForm};
use xifree::census::inequality::{inequality_check, CheckParams, InequalityKind};
use xifree::census::residual::recurrence_residual;
use xifree::census::{compute_wk, wright_constants, ForbiddenSet};
use xifree::oracle::{census, connected_counts, Predicate};
use xifree::probability::{low_complexity_probability, profile_probability, profile_weight, ComponentProfile, Deduction};
use xifree::simulator::{run_trials, EdgeTarget, Event, ProcessConfig, ProcessModel};
use xifree::{Error, Model, Rational, XExpr};

#[derive(Parser, Debug)]
#[command(name = "xifree", version, about = "Sparse labelled graphs avoiding forbidden subgraphs: exact counts, asymptotics, simulation")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Print rationals as floats.
    #[arg(long, global = true)]
    approx: bool,
    /// Worker threads for brute and simulate.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AsymptoticKind {
    TnSaddle,
    TnFixed,
    C,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wright constants b, c, c', c'^ξ up to kmax.
    Constants {
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        #[arg(long, default_value_t = 1)]
        polygons: u32,
    },
    /// Counts (and optionally the X-expansion) of a catalogued EGF.
    Egf {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long)]
        decompose: bool,
        /// Polygon set for the w0-xi forms.
        #[arg(long, default_value = "none")]
        forbidden: String,
    },
    /// W_k from the differential recurrence.
    Wk {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "graph")]
        model: Model,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// c(n, n+k) from the exponential formula.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value = "graph")]
        model: Model,
    },
    /// Exhaustive predicate census over all n-vertex, m-edge graphs.
    Brute {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "")]
        pred: String,
        #[arg(long, default_value = "graph")]
        model: Model,
    },
    /// Residual of the forbidden-subgraph functional equation.
    Residual {
        #[arg(long)]
        k: i64,
        #[arg(long, default_value = "c3")]
        forbidden: String,
        #[arg(long, default_value = "graph")]
        model: Model,
        #[arg(long, default_value_t = 25)]
        order: usize,
    },
    /// Coefficientwise inequality suites.
    Ineq {
        #[arg(long)]
        which: InequalityKind,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        epsilon: Rational,
        #[arg(long, default_value_t = 1)]
        polygons: u32,
    },
    /// Log-space asymptotic estimates, with exact comparison where available.
    Asympt {
        #[arg(long, value_enum)]
        what: AsymptoticKind,
        #[arg(long)]
        n: usize,
        /// Total exponent a n for tn-saddle.
        #[arg(long)]
        exponent: Option<i64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        beta: i64,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        k: Option<i64>,
    },
    /// Leading-order component-profile probabilities.
    Prob {
        /// Counts r1,r2,... of excess-1, excess-2, ... components (empty for none).
        #[arg(long, default_value = "")]
        profile: String,
        #[arg(long, default_value = "")]
        theta: String,
        /// Repeatable `k:cH` deduction, e.g. `3:1/24`.
        #[arg(long)]
        deduct: Vec<String>,
        /// Also report the all-components-excess ≤ L probability (L = 0 or 1).
        #[arg(long)]
        low: Option<u32>,
    },
    /// Monte Carlo estimate of an event.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "mu")]
        m: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        #[arg(long, default_value = "uniform")]
        model: ProcessModel,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "maxexcess:0")]
        event: Event,
        #[arg(long, default_value = "none")]
        forbidden: String,
        #[arg(long, default_value_t = 3)]
        max_excess_tracked: usize,
    },
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::ResourceLimit(_) => 3,
        Error::Consistency(_) | Error::PinInconsistent { .. } | Error::NotInImage(_) => 4,
        _ => 2,
    }
}

fn parse_list(text: &str) -> Result<Vec<u32>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| item.parse().map_err(|_| Error::Parse(format!("'{item}' is not a nonnegative integer"))))
        .collect()
}

fn counts(expr: &XExpr, order: usize, style: Style) -> Value {
    let values: Vec<Rational> = (0..=order).map(|n| expr.count(n)).collect();
    style.rationals(&values)
}

fn decomposition(expr: &XExpr, style: Style) -> Value {
    let terms: Vec<Value> = expr.tree_basis().iter().map(|(t, c)| json!({"power": t, "coeff": style.rational(c)})).collect();
    json!({"x_terms": terms, "log_coeff": style.rational(expr.log_coeff()), "excess": expr.excess()})
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let style = Style { approx: cli.approx };
    let report = match &cli.command {
        Command::Constants { kmax, polygons } => {
            let table = wright_constants(*kmax, *polygons)?;
            let mut r = Report::new("constants");
            r.param("kmax", *kmax).param("polygons", *polygons);
            r.result("b", style.rationals(&table.b[1..]))
                .result("c", style.rationals(&table.c[1..]))
                .result("cprime", style.rationals(&table.cprime[1..]))
                .result("cprime_xi", style.rationals(&table.cprime_xi[1..]))
                .result("band_holds", table.band_holds());
            r.note("sequences start at k = 1; both routes for c' and c'^xi agreed");
            r
        }
        Command::Egf { name, order, decompose, forbidden } => {
            let form: ClosedForm = name.parse()?;
            let expr = closed_form(form, &forbidden.parse()?)?;
            let mut r = Report::new("egf");
            r.param("name", form.name()).param("order", *order).param("forbidden", forbidden.as_str());
            r.result("counts", counts(&expr, *order, style));
            if *decompose {
                r.result("decomposition", decomposition(&expr, style));
            }
            r
        }
        Command::Wk { k, model, order } => {
            let ws = compute_wk((*k).max(1), *model)?;
            let expr = &ws[*k];
            let mut r = Report::new("wk");
            r.param("k", *k).param("model", model.to_string()).param("order", *order);
            r.result("counts", counts(expr, *order, style)).result("decomposition", decomposition(expr, style));
            r.note("each step pinned against exponential-formula counts");
            r
        }
        Command::Oracle { n, k, model } => {
            let table = connected_counts(*model, *n, *k)?;
            let mut r = Report::new("oracle");
            r.param("n", *n).param("k", *k).param("model", model.to_string());
            r.result("count", style.rational(&table.get(*n, *k)));
            r.note("exponential formula over truncated polynomials");
            r
        }
        Command::Brute { n, m, pred, model } => {
            let predicate: Predicate = pred.parse()?;
            let total = census(*model, *n, *m, &predicate, cli.workers)?;
            let mut r = Report::new("brute");
            r.param("n", *n).param("m", *m).param("pred", pred.as_str()).param("model", model.to_string());
            r.result("count", style.rational(&total));
            r
        }
        Command::Residual { k, forbidden, model, order } => {
            let set: ForbiddenSet = forbidden.parse()?;
            let residual = recurrence_residual(*k, &set, *model, *order)?;
            let mut r = Report::new("residual");
            r.param("k", *k).param("forbidden", set.to_string()).param("model", model.to_string()).param("order", *order);
            r.result("zero", residual.is_zero()).result("coefficients", style.rationals(residual.coeffs()));
            r
        }
        Command::Ineq { which, k, order, epsilon, polygons } => {
            let params = CheckParams { epsilon: epsilon.clone(), polygons: *polygons };
            let outcome = inequality_check(*which, *k, *order, &params)?;
            let mut r = Report::new("ineq");
            r.param("which", which.name()).param("k", *k).param("order", *order).param("epsilon", epsilon.to_string());
            r.result("holds", outcome.holds)
                .result("checked", outcome.checked)
                .result("first_violation", outcome.first_violation.map_or(Value::Null, Value::from))
                .result("minimal_epsilon", outcome.minimal_epsilon.map_or(Value::Null, float));
            r
        }
        Command::Asympt { what, n, exponent, beta, y, k } => {
            let mut r = Report::new("asympt");
            r.param("n", *n);
            let missing = |flag: &str| Error::Parse(format!("--{flag} is required"));
            match what {
                AsymptoticKind::TnSaddle => {
                    let exponent = exponent.ok_or_else(|| missing("exponent"))?;
                    r.param("what", "tn-saddle").param("exponent", exponent).param("beta", *beta);
                    let point = asymptotics::saddle_comparison(*n, exponent, *beta, 5.0)?;
                    let a = exponent as f64 / *n as f64;
                    r.result("ln_estimate", float(asymptotics::tn_saddle(*n, a, *beta as f64)?))
                        .result("ln_exact", float(asymptotics::tn_exact_ln(*n, exponent + beta)?))
                        .result("relative_error", float(point.relative_error))
                        .result("tolerance", float(point.tolerance));
                }
                AsymptoticKind::TnFixed => {
                    let y = y.ok_or_else(|| missing("y"))?;
                    r.param("what", "tn-fixed").param("y", y);
                    r.result("ln_estimate", float(asymptotics::tn_fixed(*n, y)?));
                    if y.fract() == 0.0 && y >= 1.0 {
                        r.result("ln_exact", float(asymptotics::tn_exact_ln(*n, y as i64)?));
                    }
                }
                AsymptoticKind::C => {
                    let k = k.ok_or_else(|| missing("k"))?;
                    r.param("what", "c").param("k", k);
                    r.result("ln_estimate", float(asymptotics::c_asymptotic(*n, k)?))
                        .result("ratio_exact_over_estimate", float(asymptotics::connected_ratio(*n, k)?));
                    r.note("d_k replaced by its limit 1/(2 pi)");
                }
            }
            r
        }
        Command::Prob { profile, theta, deduct, low } => {
            let profile = ComponentProfile::new(parse_list(profile)?);
            let theta = parse_list(theta)?;
            let deductions = deduct
                .iter()
                .map(|item| {
                    let (k, c) = item.split_once(':').ok_or_else(|| Error::Parse(format!("deduction '{item}' is not k:cH")))?;
                    Ok(Deduction {
                        k: k.trim().parse().map_err(|_| Error::Parse(format!("bad excess in '{item}'")))?,
                        c_h: c.trim().parse().map_err(|_| Error::Parse(format!("bad constant in '{item}'")))?,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let mut r = Report::new("prob");
            r.param("profile", json!(profile.counts)).param("theta", json!(theta));
            r.result("rational_factor", style.rational(&profile_weight(&profile, &deductions)?))
                .result("probability", float(profile_probability(&profile, &theta, &deductions)?));
            if let Some(level) = low {
                r.result("low_complexity", float(low_complexity_probability(*level, &theta)?));
            }
            r.note("leading order; the O(n^(-1/3)) correction is not modelled");
            r
        }
        Command::Simulate { n, m, mu, model, trials, seed, event, forbidden, max_excess_tracked } => {
            let edges = match (m, mu) {
                (Some(m), _) => EdgeTarget::Count(*m),
                (None, Some(mu)) => EdgeTarget::Window(*mu),
                (None, None) => EdgeTarget::Count(n / 2),
            };
            let config = ProcessConfig {
                edges,
                max_excess_tracked: *max_excess_tracked,
                ..ProcessConfig::new(*n, *model, *trials, *seed)
            }
            .with_forbidden(forbidden.parse()?);
            let estimate = run_trials(&config, event, cli.workers)?;
            let mut r = Report::new("simulate");
            r.param("n", *n)
                .param("m", config.edge_count()?)
                .param("model", model.to_string())
                .param("trials", *trials)
                .param("seed", *seed)
                .param("event", event.to_string())
                .param("forbidden", config.forbidden.to_string());
            r.result("p_hat", float(estimate.p_hat))
                .result("stderr", float(estimate.stderr))
                .result("trials_used", estimate.trials)
                .result("discarded", estimate.discarded);
            r.note(format!("ChaCha8 keyed by seed {seed} and trial index"));
            r
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}
