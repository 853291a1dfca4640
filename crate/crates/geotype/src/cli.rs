//! Argument parsing and the subcommands behind the `geotype` binary.
//!
//! Exit codes: 0 success (or pseudo-Anosov for `check`), 1 a negative answer
//! (invalid file, not pseudo-Anosov, refused input), 2 inconclusive `check`,
//! 3 usage, I/O or computation errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use geotype_core::algebra::{horizontal_type, power};
use geotype_core::paclass::{DecideOptions, Status, Verdict};
use geotype_core::refine::{compare_invariants, corner_refine, joint_refine, s_refine, u_refine, Comparison};
use geotype_core::singular::{census, SingularityReport};
use geotype_core::symbolic::{
    enumerate_periodic_orbits, is_s_boundary_orbit, is_u_boundary_orbit, labels, s_boundary_code, u_boundary_code,
    PeriodicOrbit,
};
use geotype_core::{incidence_matrix, GeometricType, DEFAULT_MAX_CELLS, DEFAULT_MAX_PERIOD};
use serde_json::json;

use crate::format::{parse_request, parse_type, serialize_type, ParseError};
use crate::parallel::decide_with_jobs;
use crate::report::{
    sidecar, status_name, BoundaryCodeJson, ComparisonJson, InputDigest, RunReport, SingularityJson, VerdictJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "geotype", version, about = "Algorithms on geometric types of Markov partitions")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Threads for the per-iterate obstruction sweep.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Largest power, in cells, the decision procedure may build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CELLS)]
    pub max_cells: usize,
    /// Largest orbit period accepted for enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PERIOD)]
    pub max_period: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a type file and list violations.
    Validate { path: PathBuf },
    /// Print the incidence matrix.
    Matrix { path: PathBuf },
    /// Decide membership in the pseudo-Anosov class.
    Check { path: PathBuf },
    /// Singularity census and genus.
    Genus { path: PathBuf },
    /// Write T^m.
    Power {
        #[arg(short = 'm', long)]
        m: usize,
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the inverse type.
    Inverse {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the horizontal type H(T).
    Hrefine {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// s-boundary refinement along the orbits listed in a request file.
    RefineS {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the bookkeeping sidecar.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// u-boundary refinement along the orbits listed in a request file.
    RefineU {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Corner refinement.
    Corner {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Joint refinement of two types; writes `<prefix>.fg.gt` and `<prefix>.gf.gt`.
    Joint {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare invariants after joint refinement.
    Compare { first: PathBuf, second: PathBuf },
    /// Periodic orbits up to a period and the boundary codes.
    Orbits {
        path: PathBuf,
        #[arg(short = 'p', long, default_value_t = 3)]
        period: usize,
    },
}

/// What a subcommand produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    /// Warnings, printed on stderr.
    pub notes: String,
    pub result: serde_json::Value,
}

impl Outcome {
    fn ok(text: String, result: serde_json::Value) -> Self {
        Outcome { code: EXIT_OK, text, notes: String::new(), result }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn error(message: impl Into<String>) -> Self {
        Failure { code: EXIT_ERROR, message: message.into() }
    }
}

impl From<geotype_core::Error> for Failure {
    fn from(e: geotype_core::Error) -> Self {
        Failure::error(e.to_string())
    }
}

struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::error(format!("{}: cannot read: {}", path.display(), e)))?;
        self.digests.push(InputDigest::new(&path.display().to_string(), &bytes));
        String::from_utf8(bytes).map_err(|_| Failure::error(format!("{}: not UTF-8 text", path.display())))
    }

    fn parse_err(path: &Path, e: ParseError) -> Failure {
        Failure { code: EXIT_NO, message: format!("{}: {}", path.display(), e) }
    }

    fn ty(&mut self, path: &Path) -> Result<GeometricType, Failure> {
        let text = self.read(path)?;
        parse_type(&text).map_err(|e| Self::parse_err(path, e))
    }
}

fn write_or_print(output: &Option<PathBuf>, text: String) -> Result<String, Failure> {
    match output {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Failure::error(format!("{}: cannot write: {}", p.display(), e)))?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text),
    }
}

fn binary(t: GeometricType) -> GeometricType {
    if incidence_matrix(&t).is_binary() {
        t
    } else {
        horizontal_type(&t)
    }
}

fn need_binary(t: &GeometricType, path: &Path) -> Result<(), Failure> {
    if incidence_matrix(t).is_binary() {
        Ok(())
    } else {
        Err(Failure::error(format!("{}: incidence matrix is not binary; run `geotype hrefine` first", path.display())))
    }
}

fn verdict_text(v: &Verdict) -> String {
    match (&v.status, &v.witness) {
        (Status::NotPseudoAnosov, Some(w)) => {
            format!("NotPseudoAnosov: {} at m={}, indices {:?}\n", w.kind.name(), w.m, w.indices())
        }
        (Status::Inconclusive, _) => {
            format!("Inconclusive: cell cap reached after m={}\n", v.iterates_checked)
        }
        (s, _) => format!("{} (iterates checked: {})\n", status_name(*s), v.iterates_checked),
    }
}

/// Decides `t`; refuses non-pseudo-Anosov input, warns on inconclusive.
fn require_pa(t: &GeometricType, path: &Path, g: &Global, notes: &mut String) -> Result<Verdict, Failure> {
    let v = decide_with_jobs(t, DecideOptions { max_cells: g.max_cells }, g.jobs);
    match v.status {
        Status::NotPseudoAnosov => Err(Failure {
            code: EXIT_NO,
            message: format!("{}: refused, {}", path.display(), verdict_text(&v).trim_end()),
        }),
        Status::Inconclusive => {
            writeln!(
                notes,
                "warning: {}: pseudo-Anosov check inconclusive (cell cap after m={}); proceeding",
                path.display(),
                v.iterates_checked
            )
            .unwrap();
            Ok(v)
        }
        Status::PseudoAnosov => Ok(v),
    }
}

fn census_text(r: &SingularityReport) -> String {
    let mut s = format!("genus {}\n", r.genus);
    writeln!(s, "euler characteristic {}/4", r.euler_characteristic_quarters).unwrap();
    writeln!(s, "classes {}", r.classes.iter().map(|c| c.size().to_string()).collect::<Vec<_>>().join(" ")).unwrap();
    if r.prongs.is_empty() {
        writeln!(s, "singularities: none").unwrap();
    } else {
        writeln!(s, "singularities (prongs): {}", r.prongs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap();
    }
    writeln!(s, "spines {}", r.spine_count).unwrap();
    s
}

fn comparison_text(c: &Comparison) -> String {
    let one = |x: &geotype_core::refine::Invariants| {
        format!("genus {}, prongs {:?}, spines {}, dilatation {:.12}", x.genus, x.prongs, x.spine_count, x.dilatation)
    };
    format!("first:  {}\nsecond: {}\n{}\n", one(&c.first), one(&c.second), c.verdict.text())
}

fn refine_cmd(
    inputs: &mut Inputs,
    path: &Path,
    output: &Option<PathBuf>,
    side: Option<&PathBuf>,
    unstable: bool,
) -> Result<Outcome, Failure> {
    let text = inputs.read(path)?;
    let req = parse_request(&text).map_err(|e| Inputs::parse_err(path, e))?;
    need_binary(&req.ty, path)?;
    let family = req
        .orbits
        .iter()
        .map(|w| PeriodicOrbit::new(&req.ty, &w.iter().map(|x| x - 1).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>, _>>()?;
    let (r, bk) = if unstable { u_refine(&req.ty, &family)? } else { s_refine(&req.ty, &family)? };
    let rows = sidecar(&bk);
    let sc = serde_json::to_string_pretty(&rows).unwrap();
    if let Some(p) = side {
        std::fs::write(p, sc + "\n").map_err(|e| Failure::error(format!("{}: cannot write: {}", p.display(), e)))?;
    }
    let out = serialize_type(&r);
    let result = json!({ "type": out, "bookkeeping": rows });
    Ok(Outcome::ok(write_or_print(output, out)?, result))
}

fn run_command(cmd: &Command, g: &Global, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { path } => {
            let t = inputs.ty(path)?;
            let text = format!("valid: {} rectangles, {} cells\n", t.n(), t.alpha());
            Ok(Outcome::ok(text, json!({ "valid": true, "n": t.n(), "cells": t.alpha() })))
        }
        Command::Matrix { path } => {
            let a = incidence_matrix(&inputs.ty(path)?);
            let rows = a.rows();
            let text: String =
                rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n").collect();
            Ok(Outcome::ok(text, json!({ "matrix": rows })))
        }
        Command::Check { path } => {
            let t = inputs.ty(path)?;
            let v = decide_with_jobs(&t, DecideOptions { max_cells: g.max_cells }, g.jobs);
            let code = match v.status {
                Status::PseudoAnosov => EXIT_OK,
                Status::NotPseudoAnosov => EXIT_NO,
                Status::Inconclusive => EXIT_INCONCLUSIVE,
            };
            let result = serde_json::to_value(VerdictJson::from(&v)).unwrap();
            Ok(Outcome { code, ..Outcome::ok(verdict_text(&v), result) })
        }
        Command::Genus { path } => {
            let t = inputs.ty(path)?;
            let mut notes = String::new();
            let v = require_pa(&t, path, g, &mut notes)?;
            let r = census(&t)?;
            let result = json!({ "verdict": VerdictJson::from(&v), "report": SingularityJson::from(&r) });
            Ok(Outcome { notes, ..Outcome::ok(census_text(&r), result) })
        }
        Command::Power { m, path, output } => {
            let t = inputs.ty(path)?;
            let out = serialize_type(&power(&t, *m, g.max_cells)?);
            Ok(Outcome::ok(write_or_print(output, out.clone())?, json!({ "type": out })))
        }
        Command::Inverse { path, output } => {
            let out = serialize_type(&inputs.ty(path)?.inverse());
            Ok(Outcome::ok(write_or_print(output, out.clone())?, json!({ "type": out })))
        }
        Command::Hrefine { path, output } => {
            let out = serialize_type(&horizontal_type(&inputs.ty(path)?));
            Ok(Outcome::ok(write_or_print(output, out.clone())?, json!({ "type": out })))
        }
        Command::RefineS { path, output, sidecar } => refine_cmd(inputs, path, output, sidecar.as_ref(), false),
        Command::RefineU { path, output, sidecar } => refine_cmd(inputs, path, output, sidecar.as_ref(), true),
        Command::Corner { path, output } => {
            let t = inputs.ty(path)?;
            need_binary(&t, path)?;
            let out = serialize_type(&corner_refine(&t)?);
            Ok(Outcome::ok(write_or_print(output, out.clone())?, json!({ "type": out })))
        }
        Command::Joint { first, second, output } => {
            let a = binary(inputs.ty(first)?);
            let b = binary(inputs.ty(second)?);
            let (fg, gf) = joint_refine(&a, &b, g.max_period)?;
            let cmp = compare_invariants(&fg, &gf)?;
            let (sf, sg) = (serialize_type(&fg), serialize_type(&gf));
            let mut text = match output {
                Some(prefix) => {
                    let pf = PathBuf::from(format!("{}.fg.gt", prefix.display()));
                    let pg = PathBuf::from(format!("{}.gf.gt", prefix.display()));
                    write_or_print(&Some(pf), sf.clone())? + &write_or_print(&Some(pg), sg.clone())?
                }
                None => format!(
                    "# joint refinement of {}\n{}# joint refinement of {}\n{}",
                    first.display(),
                    sf,
                    second.display(),
                    sg
                ),
            };
            text.push_str(&comparison_text(&cmp).lines().map(|l| format!("# {}\n", l)).collect::<String>());
            let result = json!({ "first": sf, "second": sg, "comparison": ComparisonJson::from(&cmp) });
            Ok(Outcome::ok(text, result))
        }
        Command::Compare { first, second } => {
            let (ta, tb) = (inputs.ty(first)?, inputs.ty(second)?);
            let mut notes = String::new();
            let va = require_pa(&ta, first, g, &mut notes)?;
            let vb = require_pa(&tb, second, g, &mut notes)?;
            let (fg, gf) = joint_refine(&binary(ta), &binary(tb), g.max_period)?;
            let cmp = compare_invariants(&fg, &gf)?;
            let result = json!({
                "verdicts": [VerdictJson::from(&va), VerdictJson::from(&vb)],
                "comparison": ComparisonJson::from(&cmp),
            });
            Ok(Outcome { notes, ..Outcome::ok(comparison_text(&cmp), result) })
        }
        Command::Orbits { path, period } => {
            let t = inputs.ty(path)?;
            need_binary(&t, path)?;
            let orbits = enumerate_periodic_orbits(&t, *period, g.max_period)?;
            let mut text = String::new();
            let mut list = Vec::new();
            for o in &orbits {
                let w: Vec<usize> = o.word().iter().map(|x| x + 1).collect();
                let (s, u) = (is_s_boundary_orbit(&t, o), is_u_boundary_orbit(&t, o));
                let tag = match (s, u) {
                    (true, true) => " s-boundary u-boundary",
                    (true, false) => " s-boundary",
                    (false, true) => " u-boundary",
                    (false, false) => "",
                };
                writeln!(
                    text,
                    "orbit {} {}{}",
                    w.len(),
                    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                    tag
                )
                .unwrap();
                list.push(json!({ "word": w, "s_boundary": s, "u_boundary": u }));
            }
            let s_codes: Vec<BoundaryCodeJson> = labels(&t).iter().map(|&l| (&s_boundary_code(&t, l)).into()).collect();
            let u_codes: Vec<BoundaryCodeJson> = labels(&t).iter().map(|&l| (&u_boundary_code(&t, l)).into()).collect();
            for (name, codes) in [("s", &s_codes), ("u", &u_codes)] {
                for c in codes {
                    writeln!(
                        text,
                        "{}-code ({},{:+}) preperiod {:?} period {:?}",
                        name, c.label.i, c.label.eps, c.preperiod, c.period
                    )
                    .unwrap();
                }
            }
            Ok(Outcome::ok(text, json!({ "orbits": list, "s_codes": s_codes, "u_codes": u_codes })))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Matrix { .. } => "matrix",
        Command::Check { .. } => "check",
        Command::Genus { .. } => "genus",
        Command::Power { .. } => "power",
        Command::Inverse { .. } => "inverse",
        Command::Hrefine { .. } => "hrefine",
        Command::RefineS { .. } => "refine-s",
        Command::RefineU { .. } => "refine-u",
        Command::Corner { .. } => "corner",
        Command::Joint { .. } => "joint",
        Command::Compare { .. } => "compare",
        Command::Orbits { .. } => "orbits",
    }
}

/// Runs a parsed command line. Returns the exit code with the stdout and stderr text.
pub fn run(cli: &Cli) -> (i32, String, String) {
    let start = Instant::now();
    let mut inputs = Inputs { digests: Vec::new() };
    let outcome = run_command(&cli.command, &cli.global, &mut inputs);
    let elapsed = start.elapsed().as_millis() as u64;
    let name = command_name(&cli.command);
    match outcome {
        Ok(o) if cli.global.json => {
            let rep = RunReport::new(name, inputs.digests, o.result, elapsed);
            (o.code, serde_json::to_string_pretty(&rep).unwrap() + "\n", o.notes)
        }
        Ok(o) => (o.code, o.text, o.notes),
        Err(f) if cli.global.json => {
            let rep = RunReport::new(name, inputs.digests, json!({ "error": f.message }), elapsed);
            (f.code, serde_json::to_string_pretty(&rep).unwrap() + "\n", f.message + "\n")
        }
        Err(f) => (f.code, String::new(), f.message + "\n"),
    }
}
