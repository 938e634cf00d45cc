//! `macc`: build, verify and simulate multiaccess coded caching schemes.

mod args;
mod topology;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Serialize;

use macc::combinatorics::{
    catalog_design, catalog_oa, complete_design, linear_oa, parity_oa, transversal_gdd, trivial_oa, verify_gdd,
    verify_oa, verify_t_design, Design, GroupDivisibleDesign, OrthogonalArray,
};
use macc::io::{self, DesignWire, GddWire, OaWire, Object, PdaWire};
use macc::pda::{mn_pda, pda_stats, verify_pda, Pda};
use macc::scheme::MaccScheme;
use macc::simulator::{self, DemandVector, Library, Mode, SimulationReport};
use macc::tables;
use macc::Error;

use args::{Cli, Command, DemandArg, Format, ModeArg, Which};
use topology::Built;

const VERIFY_FAILED: u8 = 1;
const INVALID_PARAMETERS: u8 = 2;
const PARSE_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::Parse(_) => PARSE_ERROR,
                Error::NotAPda(_) | Error::InconsistentDesign(_) | Error::ReductionGuarantee { .. } | Error::Decode { .. } => {
                    VERIFY_FAILED
                }
                _ => INVALID_PARAMETERS,
            };
        }
    }
    INVALID_PARAMETERS
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Design(cmd) => {
            let d = if let Some(name) = &cmd.catalog {
                catalog_design(name)?
            } else if let Some([g, l]) = cmd.complete {
                complete_design(g, l)?
            } else {
                load_design(cmd.input.as_deref().expect("clap enforces a source"))?
            };
            if cmd.check {
                return check_design(&d, cli.format);
            }
            emit_object(cli.format, &Object::Design(DesignWire::from_design(&d)), &d)
        }
        Command::Gdd(cmd) => {
            let g = if let Some([m, q, t]) = cmd.transversal {
                transversal_gdd(m, q, t)?
            } else if let Some([m, q]) = cmd.dual_parity {
                topology::dual_parity_gdd(m, q)?
            } else {
                load_gdd(cmd.input.as_deref().expect("clap enforces a source"))?
            };
            if cmd.check {
                return check_gdd(&g, cli.format);
            }
            emit_object(cli.format, &Object::Gdd(GddWire::from_gdd(&g)), &g)
        }
        Command::Oa(cmd) => {
            let oa = if let Some([m, q]) = cmd.trivial {
                trivial_oa(m, q)?
            } else if let Some([m, q]) = cmd.parity {
                parity_oa(m, q)?
            } else if let Some([m, q, s]) = cmd.linear {
                linear_oa(m, q, s)?
            } else if let Some(name) = &cmd.catalog {
                catalog_oa(name)?
            } else {
                load_oa(cmd.input.as_deref().expect("clap enforces a source"))?
            };
            if cmd.check {
                return check_oa(&oa, cli.format);
            }
            emit_object(cli.format, &Object::Oa(OaWire::from_oa(&oa)), &oa)
        }
        Command::Pda(cmd) => {
            let p = match cmd.mn {
                Some([k, t]) => mn_pda(k, t)?,
                None => load_pda(cmd.input.as_deref().expect("clap enforces a source"))?,
            };
            check_pda(&p, cli.format, true)
        }
        Command::Scheme(cmd) => {
            let built = topology::build(&cmd.topology)?;
            let bundle = built.bundle();
            if let Some(path) = &cmd.output {
                write(path, serde_json::to_string_pretty(&bundle)?.as_bytes())?;
            }
            match cli.format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&bundle)?),
                Some(Format::Csv) => bail!(Error::InvalidParameters("csv output is only available for tables".into())),
                Some(Format::Table) => {
                    print!("{}", built.summary());
                    print!("{}", built.render());
                }
                None => print!("{}", built.summary()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate(cmd) => {
            let built = topology::build(&cmd.topology)?;
            match &built {
                Built::Design(s) => simulate(s, cmd, cli),
                Built::Gdd(s) => simulate(s, cmd, cli),
            }
        }
        Command::Tables(cmd) => {
            let rows = match cmd.which {
                Which::Table4 => tables::table4()?,
                Which::Fig3 => tables::fig3()?,
                Which::Fig4 => tables::fig4()?,
            };
            match cli.format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&rows)?),
                _ => print!("{}", tables::to_csv(&rows)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(cmd) => match load(&cmd.path)? {
            Object::Design(w) => check_design(&w.to_design()?, cli.format),
            Object::Gdd(w) => check_gdd(&w.to_gdd()?, cli.format),
            Object::Oa(w) => check_oa(&w.to_oa()?, cli.format),
            Object::Pda(w) => check_pda(&w.to_pda()?, cli.format, false),
        },
    }
}

fn simulate(scheme: &impl MaccScheme, cmd: &args::SimulateCmd, cli: &Cli) -> Result<ExitCode> {
    let k = scheme.num_users();
    let files = cmd.files.unwrap_or(k);
    let library = Library::random(files, scheme.subpacketization(), cmd.packet_len, cli.seed)?;
    let mode = match cmd.mode {
        ModeArg::Plain => Mode::Plain,
        ModeArg::Mds => Mode::Mds,
    };
    let demands = match cmd.demands {
        DemandArg::Distinct => {
            if files < k {
                bail!(Error::InvalidParameters(format!("distinct demands need N ≥ K, got N={files}, K={k}")));
            }
            vec![DemandVector::distinct(k)]
        }
        DemandArg::Random => DemandVector::seeded(k, files, cmd.runs, cli.seed),
    };
    if let (Some(path), Some(d)) = (&cmd.transcript, demands.first()) {
        let plan = match mode {
            Mode::Plain => simulator::deliver_plain(scheme, &library, d)?,
            Mode::Mds => simulator::deliver_mds(scheme, &library, d)?,
        };
        write(path, &plan.transcript().encode())?;
    }
    let reports: Vec<SimulationReport> = demands
        .iter()
        .map(|d| simulator::simulate(scheme, &library, d, mode))
        .collect::<macc::Result<_>>()?;
    let ok = reports.iter().all(|r| r.all_decoded && r.load == r.expected_load);
    match cli.format {
        Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&reports)?),
        _ => {
            for (i, (r, d)) in reports.iter().zip(&demands).enumerate() {
                let decoded = r.decoded.iter().filter(|&&x| x).count();
                println!(
                    "run {}: d={:?} sent {} symbols, R={} (expected {}), decoded {decoded}/{}",
                    i + 1,
                    d.0,
                    r.symbols_sent,
                    r.load,
                    r.expected_load,
                    r.users
                );
                for f in &r.failures {
                    println!("  {f}");
                }
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(VERIFY_FAILED) })
}

fn emit_object(format: Option<Format>, object: &Object, text: &impl std::fmt::Display) -> Result<ExitCode> {
    match format {
        Some(Format::Json) => println!("{}", io::to_json(object)),
        Some(Format::Csv) => bail!(Error::InvalidParameters("csv output is only available for tables".into())),
        _ => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn report<R: Serialize>(format: Option<Format>, report: &R, passed: bool, lines: &[String]) -> Result<ExitCode> {
    match format {
        Some(Format::Json) => println!("{}", serde_json::to_string_pretty(report)?),
        _ => {
            for l in lines {
                println!("{l}");
            }
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(VERIFY_FAILED) })
}

fn check_design(d: &Design, format: Option<Format>) -> Result<ExitCode> {
    let Some(tag) = d.tag() else {
        bail!(Error::InvalidInput("the design carries no t and lambda to verify".into()));
    };
    let r = verify_t_design(d, tag.t, tag.lambda);
    let mut lines = vec![format!(
        "{}-({},{},{}) design: {}",
        tag.t,
        d.num_points(),
        d.block_size(),
        tag.lambda,
        verdict(r.passed)
    )];
    if let Some((set, n)) = &r.first_violation {
        lines.push(format!("{} lies in {n} blocks", macc::math::braces(set)));
    }
    report(format, &r, r.passed, &lines)
}

fn check_gdd(g: &GroupDivisibleDesign, format: Option<Format>) -> Result<ExitCode> {
    let Some(tag) = g.tag() else {
        bail!(Error::InvalidInput("the GDD carries no t and lambda to verify".into()));
    };
    let r = verify_gdd(g, tag.t, tag.lambda);
    let mut lines = vec![format!(
        "{}-({},{},{},{}) GDD: {}",
        tag.t,
        g.num_groups(),
        g.group_size(),
        g.block_size(),
        tag.lambda,
        verdict(r.passed)
    )];
    if !r.block_count_matches {
        lines.push(format!("{} blocks, expected {}", g.num_blocks(), r.expected_blocks));
    }
    if let Some((set, n)) = &r.first_violation {
        let set: Vec<String> = set.iter().map(ToString::to_string).collect();
        lines.push(format!("{{{}}} lies in {n} blocks", set.join(",")));
    }
    report(format, &r, r.passed, &lines)
}

fn check_oa(oa: &OrthogonalArray, format: Option<Format>) -> Result<ExitCode> {
    let r = verify_oa(oa, oa.strength(), oa.index());
    let mut lines = vec![format!(
        "OA_{}({},{},{}): {}",
        oa.index(),
        oa.num_columns(),
        oa.alphabet(),
        oa.strength(),
        verdict(r.passed)
    )];
    if let Some((cols, tuple, n)) = &r.first_violation {
        lines.push(format!("columns {cols:?} show {tuple:?} {n} times"));
    }
    report(format, &r, r.passed, &lines)
}

fn check_pda(p: &Pda<u32>, format: Option<Format>, show: bool) -> Result<ExitCode> {
    let r = verify_pda(p);
    if format == Some(Format::Json) {
        if show {
            println!("{}", io::to_json(&Object::Pda(PdaWire::from_pda(p))));
        } else {
            println!("{}", serde_json::to_string_pretty(&r)?);
        }
        return Ok(if r.passed { ExitCode::SUCCESS } else { ExitCode::from(VERIFY_FAILED) });
    }
    let mut lines = Vec::new();
    if show {
        lines.push(p.to_text().trim_end().to_string());
    }
    match pda_stats(p) {
        Ok(stats) if r.passed => lines.push(format!("{stats} PDA: PASS, R={}", stats.load)),
        _ => lines.push(format!("PDA: FAIL ({})", r.first_violation.as_ref().map_or("".into(), ToString::to_string))),
    }
    if r.passed && r.degenerate {
        lines.push("degenerate: S=0 or Z=F".into());
    }
    report(None, &r, r.passed, &lines)
}

fn load(path: &Path) -> Result<Object> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::parse(&text)?)
}

fn wrong_type(expected: &str, found: &Object) -> anyhow::Error {
    let found = match found {
        Object::Design(_) => "design",
        Object::Gdd(_) => "gdd",
        Object::Oa(_) => "oa",
        Object::Pda(_) => "pda",
    };
    Error::Parse(format!("expected a {expected} object, found {found}")).into()
}

pub(crate) fn load_design(path: &Path) -> Result<Design> {
    match load(path)? {
        Object::Design(w) => Ok(w.to_design()?),
        other => Err(wrong_type("design", &other)),
    }
}

pub(crate) fn load_gdd(path: &Path) -> Result<GroupDivisibleDesign> {
    match load(path)? {
        Object::Gdd(w) => Ok(w.to_gdd()?),
        other => Err(wrong_type("gdd", &other)),
    }
}

pub(crate) fn load_oa(path: &Path) -> Result<OrthogonalArray> {
    match load(path)? {
        Object::Oa(w) => Ok(w.to_oa()?),
        other => Err(wrong_type("oa", &other)),
    }
}

fn load_pda(path: &Path) -> Result<Pda<u32>> {
    match load(path)? {
        Object::Pda(w) => Ok(w.to_pda()?),
        other => Err(wrong_type("pda", &other)),
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}
