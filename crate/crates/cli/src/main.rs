//! `qgw`: command-line front end for the verification kernel.

mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qgw_core::data::DataDir;
use qgw_core::hopf::{derive_relations, Hopf};
use qgw_core::linalg::OrderTag;
use qgw_core::morphism::{check_morphism_at, derive_image_relations, MorphismSpec};
use qgw_core::presentations::{catalog_from, parse_presentation, Presentation};
use qgw_core::rmatrix::{contract, paired_algebra, qybe_check_entry, triangularity_check_entry, ContractionPlan};
use qgw_core::scalar::Bindings;
use qgw_core::{CheckReport, Exec, ParamName, Scalar, Strategy};

use suite::{run_suite, Check, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "qgw",
    version,
    about = "Exact checks for two-parameter quantum groups and their Jordanian contractions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run independent work items on the rayon pool.
    #[arg(long, global = true)]
    parallel: bool,
    /// Report elapsed_ms = 0 so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Print derived facts and notes under each report.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run named check suites.
    Check(CheckArgs),
    /// Normal form of an expression in a presentation.
    Normalize {
        #[arg(long)]
        algebra: String,
        expr: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_parser = parse_bindings)]
        params: Option<Bindings>,
    },
    /// Inspect or check an R-matrix.
    Rmatrix {
        #[command(subcommand)]
        cmd: RCmd,
    },
    /// Emit the contraction limit of a plan.
    Contract {
        #[arg(long, default_value = "paper9")]
        plan: String,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        #[arg(long, value_enum)]
        order: Option<Order>,
    },
    /// Degree-2 relations read off from R T1 T2 = T2 T1 R.
    DeriveRelations {
        #[arg(long)]
        rmatrix: String,
        /// Algebra providing T; defaults to the one paired with the matrix.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Image relations of the realisation map x' = f^N x.
    Morphism {
        #[arg(long)]
        source: String,
        #[arg(long = "N", default_value_t = 1)]
        n: i64,
    },
    /// Parse a presentation file and print it in canonical form.
    Parse { file: PathBuf },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum, required = true)]
    checks: Vec<Check>,
    /// Only the subjects tied to the two-parameter algebras.
    #[arg(long)]
    paper: bool,
    /// Catalog names or file paths, replacing the default subjects.
    #[arg(long = "subject")]
    subjects: Vec<String>,
    /// Source algebra for `morphism`.
    #[arg(long)]
    source: Option<String>,
    #[arg(long = "N", num_args = 1.., value_delimiter = ',')]
    ns: Option<Vec<i64>>,
    /// Rational instantiation of R-matrix parameters, e.g. `r=2,s=3`.
    #[arg(long, value_parser = parse_bindings)]
    params: Option<Bindings>,
}

#[derive(Subcommand)]
enum RCmd {
    Show {
        name: String,
        #[arg(long, value_enum)]
        order: Option<Order>,
        #[arg(long, value_parser = parse_bindings)]
        params: Option<Bindings>,
    },
    Qybe {
        name: String,
        #[arg(long, value_parser = parse_bindings)]
        params: Option<Bindings>,
    },
    Triangular {
        name: String,
        #[arg(long, value_parser = parse_bindings)]
        params: Option<Bindings>,
    },
    Contract {
        #[arg(long, default_value = "paper9")]
        plan: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Block9,
}

impl From<Order> for OrderTag {
    fn from(o: Order) -> Self {
        match o {
            Order::Lex => OrderTag::Lex,
            Order::Block9 => OrderTag::Block9,
        }
    }
}

fn parse_bindings(s: &str) -> Result<Bindings, String> {
    let mut b = Bindings::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("`{part}` is not name=value"))?;
        let name = ParamName::new(k.trim()).map_err(|e| e.to_string())?;
        let value = Scalar::parse(v.trim()).map_err(|e| e.to_string())?;
        if value.as_rational().is_none() {
            return Err(format!("`{part}`: value must be rational"));
        }
        b.insert(name, value);
    }
    Ok(b)
}

/// Failed checks map to exit code 1, configuration and I/O errors to 2.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qgw: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_presentation(data: &DataDir, name: &str) -> Result<Presentation> {
    let path = Path::new(name);
    if path.is_file() {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_presentation(&src).with_context(|| path.display().to_string());
    }
    Ok(catalog_from(data, name)?)
}

fn exec(g: &Global) -> Exec {
    if g.parallel {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let data = DataDir::from_env();
    match &cli.cmd {
        Cmd::Check(a) => {
            let mut subjects = a.subjects.clone();
            subjects.extend(a.source.iter().cloned());
            let cfg = SuiteConfig {
                checks: a.checks.clone(),
                subjects,
                ns: a.ns.clone().unwrap_or_else(|| vec![1, 2, 3]),
                bindings: a.params.clone().unwrap_or_default(),
                paper: a.paper,
                parallel: g.parallel,
                data,
            };
            emit_reports(g, run_suite(&cfg)?)
        }
        Cmd::Normalize {
            algebra,
            expr,
            trace,
            params,
        } => {
            let mut p = load_presentation(&data, algebra)?;
            if let Some(b) = params {
                p = p.substitute(b)?;
            }
            let x = p.element(expr)?;
            let mut steps = Vec::new();
            let nf = p
                .rewrite_system()
                .normalize_with(&x, Strategy::default(), trace.then_some(&mut steps))?;
            let rules = p.rewrite_system().rules();
            if g.json {
                let steps: Vec<_> = steps
                    .iter()
                    .map(|s| json!({"word": s.word, "rule": rules[s.rule].render(), "position": s.position}))
                    .collect();
                let mut v = json!({"algebra": p.name(), "input": x.render(), "normal_form": nf.render()});
                if *trace {
                    v["trace"] = json!(steps);
                }
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                for s in &steps {
                    println!("  {} @{}  by {}", s.word, s.position, rules[s.rule].render());
                }
                println!("{}", nf.render());
            }
            Ok(Outcome::Pass)
        }
        Cmd::Rmatrix { cmd } => rmatrix_cmd(g, &data, cmd),
        Cmd::Contract { plan, emit, order } => {
            let plan = ContractionPlan::by_name(&data, plan)?;
            let m = contract(&plan, exec(g))?;
            let tag = order.map(OrderTag::from).unwrap_or(plan.source.order);
            let m = if plan.source.order == tag {
                m
            } else {
                reorder_to(&to_lex(&m, plan.source.order)?, tag)?
            };
            match (emit, g.json) {
                (Emit::Json, _) | (_, true) => println!("{}", m.to_json(tag)?),
                _ => print!("{m}"),
            }
            Ok(Outcome::Pass)
        }
        Cmd::DeriveRelations { rmatrix, algebra } => {
            let r = qgw_core::rmatrix::rmatrix_from(&data, rmatrix)?;
            let alg = match algebra {
                Some(a) => a.clone(),
                None => paired_algebra(&r.name)
                    .ok_or_else(|| anyhow!("no algebra is paired with {}; pass --algebra", r.name))?
                    .to_string(),
            };
            let h = Hopf::new(&load_presentation(&data, &alg)?)?;
            let rels = derive_relations(&r.lex(), h.tmatrix(), exec(g))?;
            let rendered: Vec<String> = rels.iter().map(|x| format!("{} = 0", x.render())).collect();
            if g.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"rmatrix": r.name, "algebra": alg, "relations": rendered}))?
                );
            } else {
                for l in rendered {
                    println!("{l}");
                }
            }
            Ok(Outcome::Pass)
        }
        Cmd::Morphism { source, n } => {
            let p = load_presentation(&data, source)?;
            let spec = MorphismSpec::new(&p, *n)?;
            let dp = derive_image_relations(&spec)?;
            let (rep, _) = check_morphism_at(&p, *n)?;
            if !g.json {
                print!("{}", dp.render()?);
            }
            emit_reports(g, vec![rep])
        }
        Cmd::Parse { file } => {
            let src = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let p = parse_presentation(&src).with_context(|| file.display().to_string())?;
            if g.json {
                let v = json!({
                    "name": p.name(),
                    "params": p.params().iter().map(|x| x.as_str()).collect::<Vec<_>>(),
                    "generators": p.generators(),
                    "rules": p.rewrite_system().rules().iter().map(|r| r.render()).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                print!("{}", p.to_dsl());
            }
            Ok(Outcome::Pass)
        }
    }
}

fn to_lex(m: &qgw_core::linalg::ParamMatrix, tag: OrderTag) -> Result<qgw_core::linalg::ParamMatrix> {
    Ok(match tag {
        OrderTag::Lex => m.clone(),
        OrderTag::Block9 => m.reorder(&qgw_core::linalg::IndexOrder::block9().inverse())?,
    })
}

fn reorder_to(lex: &qgw_core::linalg::ParamMatrix, tag: OrderTag) -> Result<qgw_core::linalg::ParamMatrix> {
    Ok(match tag {
        OrderTag::Lex => lex.clone(),
        OrderTag::Block9 => lex.reorder(&qgw_core::linalg::IndexOrder::block9())?,
    })
}

fn rmatrix_cmd(g: &Global, data: &DataDir, cmd: &RCmd) -> Result<Outcome> {
    let load = |name: &str, params: &Option<Bindings>| -> Result<qgw_core::rmatrix::RMatrixEntry> {
        let r = qgw_core::rmatrix::rmatrix_from(data, name)?;
        Ok(match params {
            Some(b) => r.instantiate(b)?,
            None => r,
        })
    };
    match cmd {
        RCmd::Show { name, order, params } => {
            let r = load(name, params)?;
            let tag = order.map(OrderTag::from).unwrap_or(r.order);
            let m = reorder_to(&r.lex(), tag)?;
            if g.json {
                println!("{}", m.to_json(tag)?);
            } else {
                println!("{} ({:?} order)", r.name, tag);
                print!("{m}");
            }
            Ok(Outcome::Pass)
        }
        RCmd::Qybe { name, params } => emit_reports(g, vec![qybe_check_entry(&load(name, params)?, exec(g))?]),
        RCmd::Triangular { name, params } => {
            emit_reports(g, vec![triangularity_check_entry(&load(name, params)?, exec(g))?])
        }
        RCmd::Contract { plan } => {
            let plan = ContractionPlan::by_name(data, plan)?;
            let target = if plan.source.dim() == 3 { "R_Gmk" } else { "R_h2" };
            let mut h = Bindings::new();
            h.insert(ParamName::of("h"), Scalar::var("m"));
            let want = qgw_core::rmatrix::rmatrix_from(data, target)?.instantiate(&h)?;
            emit_reports(g, vec![qgw_core::rmatrix::contract_check(&plan, &want, exec(g))?])
        }
    }
}

fn emit_reports(g: &Global, mut reports: Vec<CheckReport>) -> Result<Outcome> {
    if g.no_timing {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let ok = reports.iter().all(CheckReport::passed);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if g.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
    } else {
        for r in &reports {
            writeln!(out, "{}", r.summary_line())?;
            for w in &r.witnesses {
                writeln!(out, "    {}: {}", w.location, w.residual)?;
            }
            if g.verbose {
                for d in &r.derived {
                    let v = d.value.trim_end().replace('\n', "\n        ");
                    writeln!(out, "    = {}: {}", d.name, v)?;
                }
                for n in &r.notes {
                    writeln!(out, "    note: {n}")?;
                }
            }
        }
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}
