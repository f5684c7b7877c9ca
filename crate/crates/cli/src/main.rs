use std::io::Write;
use std::process::ExitCode;

use adelic_mzv::algebra::{enumerate_places, Fq, Place, Poly};
use adelic_mzv::andersonthakur::AtContext;
use adelic_mzv::carlitz::Index;
use adelic_mzv::cmspl::{cmspl_continued_v, cmspl_direct_v, cmspl_v};
use adelic_mzv::local::InfAdic;
use adelic_mzv::mzv::{
    adelic_scan, finite_zeta, zeta_inf_cmspl, zeta_inf_series, zeta_v, MzvRow, DEFAULT_BUDGET,
};
use adelic_mzv::tmodule::Continuation;
use adelic_mzv::verify;
use adelic_mzv::MathError;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const BUDGET_VAR: &str = "MZV_COST_BUDGET";

#[derive(Parser)]
#[command(name = "mzv", version, about = "v-adic, infinite-adic and finite multiple zeta values over F_q[T]")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cap on enumeration sizes (also read from MZV_COST_BUDGET).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Series,
    Cmspl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Auto,
    Direct,
    Minimal,
    Full,
    Extended,
}

#[derive(Subcommand)]
enum Command {
    /// ζ_A(s)_v at one place.
    MzvV {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        v: String,
        #[arg(long)]
        index: String,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: i64,
    },
    /// ζ_A(s) at the infinite place.
    MzvInf {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        index: String,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: i64,
        #[arg(long, value_enum, default_value = "series")]
        method: Method,
    },
    /// Li⋆_s(u)_v.
    Cmspl {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        v: String,
        #[arg(long)]
        index: String,
        #[arg(long)]
        point: String,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: i64,
        #[arg(long, value_enum, default_value = "auto")]
        route: Route,
    },
    /// The Anderson-Thakur polynomial H_n.
    AtPoly {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// ζ_A(s)_v at every place up to a degree.
    Scan {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        index: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_deg: u64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: i64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
    },
    /// The finite MZV residue in A/vA.
    Finite {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        v: String,
        #[arg(long)]
        index: String,
    },
    /// Places of degree at most max-deg.
    Places {
        #[arg(long)]
        q: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_deg: u64,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(long, value_parser = verify::SUITES)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<MathError> for Failure {
    fn from(e: MathError) -> Failure {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Math(e.to_string())
        }
    }
}

type Out = Result<(String, bool), Failure>;

fn field(q: u32) -> Result<Fq, Failure> {
    Fq::new(q).map_err(|e| Failure::Usage(e.to_string()))
}

fn index(s: &str) -> Result<Index, Failure> {
    s.parse::<Index>().map_err(|e| Failure::Usage(e.to_string()))
}

fn place(f: Fq, s: &str) -> Result<Place, Failure> {
    Place::parse(f, s).map_err(|e| Failure::Usage(e.to_string()))
}

fn point(f: Fq, s: &str) -> Result<Vec<Poly>, Failure> {
    s.split(',')
        .map(|p| Poly::parse(f, p.trim()).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

fn pretty<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

const CSV_HEADER: [&str; 10] =
    ["q", "place", "index", "abs_precision", "valuation", "digits", "bound", "criterion", "integral", "error"];

fn csv_rows(rows: &[MzvRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        let index = r.index.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let digits = r.digits.iter().map(|d| format!("{}:{}", d.pow, d.c)).collect::<Vec<_>>().join(";");
        let integral = serde_json::to_value(r.integral).expect("serializable");
        w.write_record([
            r.q.to_string(),
            r.place.clone(),
            index,
            r.abs_precision.to_string(),
            r.valuation.map(|x| x.to_string()).unwrap_or_default(),
            digits,
            r.bound.clone(),
            r.criterion.to_string(),
            integral.as_str().unwrap_or_default().to_string(),
            r.error.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn row_text(r: &MzvRow, value: &str) -> String {
    let integral = serde_json::to_value(r.integral).expect("serializable");
    match &r.error {
        Some(e) => format!("{}\terror: {e}\n", r.place),
        None => format!(
            "{}\t{}\tbound={}\tcriterion={}\tintegral={}\n",
            r.place,
            value,
            r.bound,
            r.criterion,
            integral.as_str().unwrap_or_default()
        ),
    }
}

fn inf_json(q: u32, s: &Index, x: &InfAdic) -> serde_json::Value {
    let terms: Vec<_> = x
        .terms()
        .into_iter()
        .map(|(pow, c)| json!({"pow": pow, "c": adelic_mzv::algebra::fq_to_text(x.field(), c)}))
        .collect();
    json!({
        "q": q,
        "place": "inf",
        "index": s.parts(),
        "abs_precision": x.prec(),
        "valuation": x.ord().ok(),
        "digits": terms,
    })
}

fn run(cli: Cli) -> Out {
    let budget = match cli.budget {
        Some(b) => b,
        None => match std::env::var(BUDGET_VAR) {
            Ok(s) => s
                .parse::<u64>()
                .ok()
                .filter(|&b| b > 0)
                .ok_or_else(|| Failure::Usage(format!("{BUDGET_VAR} must be a positive integer")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    let fmt = cli.format;
    match cli.command {
        Command::MzvV { q, v, index: s, prec } => {
            let f = field(q)?;
            let (v, s) = (place(f, &v)?, index(&s)?);
            let res = zeta_v(&s, &v, prec)?;
            let row = res.row();
            Ok((
                match fmt.unwrap_or(Format::Json) {
                    Format::Json => pretty(&row),
                    Format::Csv => csv_rows(&[row]),
                    Format::Text => row_text(&row, &res.value.to_string()),
                },
                true,
            ))
        }
        Command::MzvInf { q, index: s, prec, method } => {
            let f = field(q)?;
            let s = index(&s)?;
            let x = match method {
                Method::Series => zeta_inf_series(&s, f, prec, budget)?,
                Method::Cmspl => zeta_inf_cmspl(&s, f, prec)?,
            };
            Ok((
                match fmt.unwrap_or(Format::Json) {
                    Format::Text => format!("{x}\n"),
                    _ => pretty(&inf_json(q, &s, &x)),
                },
                true,
            ))
        }
        Command::Cmspl { q, v, index: s, point: u, prec, route } => {
            let f = field(q)?;
            let (v, s, u) = (place(f, &v)?, index(&s)?, point(f, &u)?);
            let x = match route {
                Route::Auto => cmspl_v(&s, &u, &v, prec)?,
                Route::Direct => cmspl_direct_v(&s, &u, &v, prec)?,
                Route::Minimal => cmspl_continued_v(&s, &u, &v, prec, Continuation::Minimal)?,
                Route::Full => cmspl_continued_v(&s, &u, &v, prec, Continuation::Full)?,
                Route::Extended => cmspl_continued_v(&s, &u, &v, prec, Continuation::Extended)?,
            };
            Ok((
                match fmt.unwrap_or(Format::Json) {
                    Format::Text => format!("{x}\n"),
                    _ => pretty(&json!({
                        "q": q,
                        "place": v.poly().to_string(),
                        "index": s.parts(),
                        "point": u.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "abs_precision": x.prec(),
                        "valuation": x.ord().ok(),
                        "digits": x.digits_json(),
                    })),
                },
                true,
            ))
        }
        Command::AtPoly { q, n } => {
            let f = field(q)?;
            let mut ctx = AtContext::new(f);
            let h = ctx.at_poly(n)?;
            Ok((
                match fmt.unwrap_or(Format::Text) {
                    Format::Text => format!("{h}\n"),
                    _ => {
                        let coeffs: Vec<String> = h.t_coeffs().iter().map(|c| c.to_string()).collect();
                        pretty(&json!({"q": q, "n": n, "poly": h.to_string(), "t_coeffs": coeffs}))
                    }
                },
                true,
            ))
        }
        Command::Scan { q, index: s, max_deg, prec, jobs } => {
            let f = field(q)?;
            let s = index(&s)?;
            let pool = rayon_pool(jobs)?;
            let rows = pool.install(|| adelic_scan(&s, f, max_deg as usize, prec));
            let out: Vec<MzvRow> = rows.iter().map(|r| r.row(&s)).collect();
            let ok = rows.iter().all(|r| r.result.is_ok());
            Ok((
                match fmt.unwrap_or(Format::Json) {
                    Format::Json => pretty(&out),
                    Format::Csv => csv_rows(&out),
                    Format::Text => rows
                        .iter()
                        .zip(&out)
                        .map(|(r, row)| {
                            let v = r.result.as_ref().map(|m| m.value.to_string()).unwrap_or_default();
                            row_text(row, &v)
                        })
                        .collect(),
                },
                ok,
            ))
        }
        Command::Finite { q, v, index: s } => {
            let f = field(q)?;
            let (v, s) = (place(f, &v)?, index(&s)?);
            let x = finite_zeta(&s, &v, budget)?;
            Ok((
                match fmt.unwrap_or(Format::Text) {
                    Format::Text => format!("{x}\n"),
                    _ => pretty(&json!({"q": q, "place": v.poly().to_string(), "index": s.parts(), "residue": x.to_string()})),
                },
                true,
            ))
        }
        Command::Places { q, max_deg } => {
            let f = field(q)?;
            let ps: Vec<String> = enumerate_places(f, max_deg as usize).iter().map(|p| p.poly().to_string()).collect();
            Ok((
                match fmt.unwrap_or(Format::Text) {
                    Format::Text => ps.iter().map(|p| format!("{p}\n")).collect(),
                    _ => pretty(&json!(ps)),
                },
                true,
            ))
        }
        Command::Verify { suite, seed } => {
            let cases = verify::run_suite(&suite, seed).ok_or_else(|| Failure::Usage(format!("unknown suite {suite}")))?;
            let passed = cases.iter().filter(|c| c.pass).count();
            let failed = cases.len() - passed;
            let text = match fmt.unwrap_or(Format::Text) {
                Format::Json => pretty(&json!({
                    "suite": suite,
                    "seed": seed,
                    "passed": passed,
                    "failed": failed,
                    "cases": cases.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut s = String::new();
                    for c in &cases {
                        let tag = if c.pass { "PASS" } else { "FAIL" };
                        if c.pass || c.detail.is_empty() {
                            s += &format!("{tag}  {}\n", c.name);
                        } else {
                            s += &format!("{tag}  {}  {}\n", c.name, c.detail);
                        }
                    }
                    s + &format!("suite {suite}: {passed} passed, {failed} failed\n")
                }
            };
            Ok((text, failed == 0))
        }
    }
}

fn rayon_pool(jobs: Option<u64>) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j as usize);
    }
    b.build().map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
