use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::debug;

use brauer_core::brauer::{
    adelic_pairing, build_class_a, evaluate_local, obstructing_adelic_point, BrauerClass, CurveArg,
    SurfacePoint,
};
use brauer_core::descent::{delta, transcendence_test, CurvePoint, Verdict};
use brauer_core::elliptic::{classify_surface, SplitCurve};
use brauer_core::exactalg::{parse_rational, RationalFunction};
use brauer_core::expr::{parse_function, split_symbol_list};
use brauer_core::hilbert::{hilbert_symbol, RationalPlace};
use brauer_core::pencil;
use brauer_core::reproduce::{all_pass, run_checks, Settings, Status};
use brauer_core::residues::{check_unramified_p1, QtBrauerClass, ResidueValue, UnramifiedOutcome};
use brauer_core::squareclass::{independent, FieldMode};
use brauer_core::Error;

#[derive(Parser)]
#[command(
    name = "brauer",
    version,
    about = "Exact computations on the pencil y^2 = x(x - p)(x - q) over Q(t)"
)]
struct Cli {
    /// Output style; `records` prints one `key = value` per line.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Constants are squares: square classes over C(t).
    #[value(name = "C", alias = "c")]
    C,
    /// Square classes over Q(t), constants included.
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(clap::Args)]
struct CurveArgs {
    /// p and q of y^2 = x(x - p)(x - q); defaults to the K3 pencil.
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_hyphen_values = true)]
    curve: Option<Vec<String>>,
}

impl CurveArgs {
    fn curve(&self) -> Result<SplitCurve, Error> {
        match &self.curve {
            None => Ok(pencil::curve()),
            Some(pq) => SplitCurve::new(parse_function(&pq[0])?, parse_function(&pq[1])?),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Kodaira fibers and surface invariants.
    Fibers {
        #[command(flatten)]
        curve: CurveArgs,
        /// Upper bound for the Picard number over C.
        #[arg(long, default_value_t = pencil::PICARD_BOUND)]
        picard_bound: i64,
    },
    /// Residues of a quaternion class over Q(t) along the projective line.
    Residues {
        /// Formal sum "(f1, g1) + (f2, g2)"; defaults to (-p, 6t(t+1)) + (-q, 6t(t-1)).
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// Images of the 2-torsion points under the descent map.
    Descent {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = Mode::C)]
        mode: Mode,
    },
    /// Whether gamma(f, g) stays nonzero over C(t).
    Transcendence {
        #[command(flatten)]
        curve: CurveArgs,
        /// f and g; defaults to 6t(t+1) and 6t(t-1).
        #[arg(long, num_args = 2, value_names = ["F", "G"], allow_hyphen_values = true)]
        pair: Option<Vec<String>>,
        #[arg(long, default_value_t = pencil::PICARD_BOUND)]
        picard_bound: i64,
    },
    /// Local Hilbert symbol (a, b)_v.
    #[command(allow_negative_numbers = true)]
    Hilbert {
        a: String,
        b: String,
        #[arg(long)]
        place: RationalPlace,
    },
    /// Local invariant of a class at a point (x0, t0) over Q_v.
    #[command(allow_negative_numbers = true)]
    Evaluate {
        #[arg(long, num_args = 2, value_names = ["X0", "T0"])]
        point: Vec<String>,
        #[arg(long)]
        place: RationalPlace,
        /// Formal sum "(x-p, f) + (x-q, g)"; first entries are x-p, x-q or x.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// The adelic pairing at M2 = (1, 2) over Q_2 and the zero section elsewhere.
    Obstruct,
    /// Runs every check on the pencil.
    ReproducePaper {
        /// Valid local points required per sampled place.
        #[arg(long, default_value_t = 25)]
        samples: usize,
        /// Bound on numerators and denominators of sampled coordinates.
        #[arg(long, default_value_t = 20)]
        height: u32,
    },
}

/// One output datum: a stable record key, a human label and a value.
struct Line {
    key: String,
    label: String,
    value: String,
}

#[derive(Default)]
struct Output {
    lines: Vec<Line>,
}

impl Output {
    fn push(&mut self, key: impl Into<String>, label: impl Into<String>, value: impl ToString) {
        self.lines.push(Line {
            key: key.into(),
            label: label.into(),
            value: value.to_string(),
        });
    }

    /// Stops quietly when stdout is closed early (e.g. piped into `head`).
    fn print(&self, format: Format) -> io::Result<()> {
        let mut w = io::BufWriter::new(io::stdout().lock());
        for l in &self.lines {
            match format {
                Format::Records => writeln!(w, "{} = {}", l.key, l.value)?,
                Format::Human if l.label.is_empty() => writeln!(w, "{}", l.value)?,
                Format::Human => writeln!(w, "{} : {}", l.label, l.value)?,
            }
        }
        w.flush()
    }
}

enum Outcome {
    Ok,
    CheckFailed,
    Unknown,
}

fn exit_code(outcome: &Outcome) -> ExitCode {
    match outcome {
        Outcome::Ok => ExitCode::SUCCESS,
        Outcome::CheckFailed => ExitCode::from(1),
        Outcome::Unknown => ExitCode::from(3),
    }
}

fn error_code(e: &Error) -> ExitCode {
    match e {
        Error::ClassificationFailure { .. } | Error::Unsupported(_) | Error::UnsupportedResidueField(_) => {
            ExitCode::from(3)
        }
        _ => ExitCode::from(2),
    }
}

fn parse_qt_class(src: &str) -> Result<QtBrauerClass, Error> {
    let symbols = split_symbol_list(src)?
        .into_iter()
        .map(|(f, g)| Ok((parse_function(&f)?, parse_function(&g)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    QtBrauerClass::new(symbols)
}

fn parse_curve_class(src: &str, curve: &SplitCurve) -> Result<BrauerClass, Error> {
    let mut symbols = Vec::new();
    for (u, f) in split_symbol_list(src)? {
        let compact: String = u.chars().filter(|c| !c.is_whitespace()).collect();
        let arg = match compact.as_str() {
            "x-p" => CurveArg::x_minus(curve.p().clone()),
            "x-q" => CurveArg::x_minus(curve.q().clone()),
            "x" => CurveArg::x(),
            _ => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("first entry must be x-p, x-q or x, got {u:?}"),
                })
            }
        };
        symbols.push((arg, parse_function(&f)?));
    }
    BrauerClass::new(curve.clone(), symbols)
}

fn fibers(out: &mut Output, curve: &SplitCurve, picard_bound: i64) -> Result<Outcome, Error> {
    let s = classify_surface(&curve.weierstrass(), picard_bound)?;
    for f in &s.fibers {
        out.push(format!("fiber.{}", f.place), f.place.to_string(), f.kodaira);
    }
    for f in &s.fibers {
        out.push(
            format!("fiber.{}.valuations", f.place),
            format!("{} minimal valuations (c4, c6, disc)", f.place),
            f.minimal_valuations,
        );
    }
    out.push("surface.euler", "euler number", s.euler);
    out.push("surface.chi", "chi", s.chi);
    out.push("surface.k3", "K3", s.is_k3);
    out.push("surface.trivial_lattice_rank", "trivial lattice rank", s.rank_r);
    out.push("surface.picard_bound", "Picard bound", s.picard_bound);
    out.push("surface.mw_rank_bound", "Mordell-Weil rank bound", s.mw_rank_bound);
    out.push("surface.semistable", "semistable", s.semistable);
    Ok(Outcome::Ok)
}

fn fmt_residue(v: &ResidueValue) -> String {
    match v {
        ResidueValue::TriviallyOne => "trivial".into(),
        ResidueValue::Class(c) if c.is_zero() => "trivial".into(),
        ResidueValue::Class(c) => format!("class {c}"),
        ResidueValue::Undetermined => "undetermined".into(),
    }
}

fn residues(out: &mut Output, class: &QtBrauerClass) -> Result<Outcome, Error> {
    let report = check_unramified_p1(class)?;
    out.push("class", "class", class);
    for p in &report.places {
        let v = &p.total.place;
        out.push(format!("residue.{v}"), format!("residue at {v}"), fmt_residue(&p.total.value));
        for (i, part) in p.per_symbol.iter().enumerate() {
            out.push(
                format!("residue.{v}.symbol{}", i + 1),
                format!("  symbol {}", i + 1),
                fmt_residue(&part.value),
            );
        }
    }
    let (verdict, outcome) = match report.outcome {
        UnramifiedOutcome::Unramified => ("true", Outcome::Ok),
        UnramifiedOutcome::Ramified => ("false", Outcome::CheckFailed),
        UnramifiedOutcome::Unknown => ("unknown", Outcome::Unknown),
    };
    out.push("unramified", "unramified", verdict);
    Ok(outcome)
}

fn descent(out: &mut Output, curve: &SplitCurve, mode: Mode) -> Result<Outcome, Error> {
    let mode = match mode {
        Mode::C => FieldMode::ConstantsAreSquares,
        Mode::Q => FieldMode::RationalConstants,
    };
    out.push("mode", "square classes over", mode);
    let mut images = Vec::new();
    for m in CurvePoint::TORSION {
        let d = delta(&m, curve, mode)?;
        out.push(format!("delta.{m}"), format!("delta({m})"), &d);
        images.push(d);
    }
    let indep = independent(&images[1..3])?;
    out.push("independent", "delta(P), delta(Q) independent", indep);
    let surface = classify_surface(&curve.weierstrass(), pencil::PICARD_BOUND)?;
    let known = indep && surface.mw_rank_bound == 0;
    let kernel = if known {
        format!("span of {} and {}", images[1], images[2])
    } else {
        "unknown".to_string()
    };
    out.push("kernel_basis", "kernel of gamma", kernel);
    Ok(if known { Outcome::Ok } else { Outcome::Unknown })
}

fn transcendence(
    out: &mut Output,
    curve: &SplitCurve,
    f: &RationalFunction,
    g: &RationalFunction,
    picard_bound: i64,
) -> Result<Outcome, Error> {
    let surface = classify_surface(&curve.weierstrass(), picard_bound)?;
    let r = transcendence_test(f, g, curve, surface.mw_rank_bound)?;
    out.push("pair", "pair", format!("({f}, {g})"));
    out.push("target", "class over C(t)", &r.target);
    for (i, b) in r.kernel_basis.iter().enumerate() {
        out.push(format!("kernel_basis.{}", i + 1), format!("kernel generator {}", i + 1), b);
    }
    out.push("mw_rank_bound", "Mordell-Weil rank bound", surface.mw_rank_bound);
    let combination = match &r.certificate.combination {
        Some(bits) => bits.iter().map(|b| u8::from(*b).to_string()).collect::<Vec<_>>().join(" "),
        None => "none".into(),
    };
    out.push("certificate.in_span", "in span", r.certificate.in_span);
    out.push("certificate.combination", "combination", combination);
    out.push("reason", "reason", &r.reason);
    out.push("verdict", "verdict", r.verdict);
    Ok(match r.verdict {
        Verdict::Unknown => Outcome::Unknown,
        _ => Outcome::Ok,
    })
}

fn run(cli: &Cli, out: &mut Output) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Fibers { curve, picard_bound } => fibers(out, &curve.curve()?, *picard_bound),
        Command::Residues { class } => {
            let class = match class {
                Some(src) => parse_qt_class(src)?,
                None => pencil::vertical_class(),
            };
            residues(out, &class)
        }
        Command::Descent { curve, mode } => descent(out, &curve.curve()?, *mode),
        Command::Transcendence { curve, pair, picard_bound } => {
            let (f, g) = match pair {
                Some(fg) => (parse_function(&fg[0])?, parse_function(&fg[1])?),
                None => (pencil::f_arg(), pencil::g_arg()),
            };
            transcendence(out, &curve.curve()?, &f, &g, *picard_bound)
        }
        Command::Hilbert { a, b, place } => {
            let s = hilbert_symbol(&parse_rational(a)?, &parse_rational(b)?, *place)?;
            out.push("symbol", "", s);
            Ok(Outcome::Ok)
        }
        Command::Evaluate { point, place, class } => {
            let class = match class {
                Some(src) => parse_curve_class(src, &pencil::curve())?,
                None => build_class_a(),
            };
            let m = SurfacePoint::affine(parse_rational(&point[1])?, parse_rational(&point[0])?, *place);
            let inv = evaluate_local(&class, &m)?;
            out.push("point", "point", &m);
            out.push("class", "class", &class);
            out.push("invariant", "invariant", inv.invariant());
            Ok(Outcome::Ok)
        }
        Command::Obstruct => {
            let class = build_class_a();
            let r = adelic_pairing(&class, &obstructing_adelic_point())?;
            out.push("class", "class", &class);
            for ((v, inv), (_, m)) in r.per_place.iter().zip(&obstructing_adelic_point().overrides) {
                out.push(format!("point.{v}"), format!("point at {v}"), m);
                out.push(format!("inv.{v}"), format!("inv at {v}"), inv.invariant());
            }
            out.push("inv.other", "inv at other places (zero section)", "0");
            out.push("sum", "sum", r.sum.invariant());
            out.push("obstructed", "obstructed", r.obstructed);
            Ok(if r.obstructed { Outcome::Ok } else { Outcome::CheckFailed })
        }
        Command::ReproducePaper { samples, height } => {
            if *samples == 0 {
                return Err(Error::InvalidArgument("--samples must be positive".into()));
            }
            let checks = run_checks(Settings { samples: *samples, height: *height })?;
            for (i, c) in checks.iter().enumerate() {
                let n = i + 1;
                out.push(format!("check.{n}.key"), format!("[{n:2}] {}", c.status), c.key);
                out.push(format!("check.{n}.claim"), "     claim", &c.claim);
                out.push(format!("check.{n}.status"), "     status", c.status);
                out.push(format!("check.{n}.support"), "     support", c.support);
                out.push(format!("check.{n}.detail"), "     detail", &c.detail);
            }
            let pass = all_pass(&checks);
            let unknown = checks.iter().any(|c| c.status == Status::Unknown);
            out.push(
                "result",
                "",
                if pass { "ALL CHECKS PASS" } else { "SOME CHECKS FAILED" },
            );
            Ok(match (pass, unknown) {
                (true, _) => Outcome::Ok,
                (false, true) => Outcome::Unknown,
                (false, false) => Outcome::CheckFailed,
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("BRAUER_LOG", "warn")).init();
    let cli = Cli::parse();
    let mut out = Output::default();
    match run(&cli, &mut out) {
        Ok(outcome) => {
            let _ = out.print(cli.format);
            debug!("{} output lines", out.lines.len());
            exit_code(&outcome)
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}
