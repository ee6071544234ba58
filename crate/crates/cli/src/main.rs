use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbitres::io::{
    EquationsReport, EulerReport, FamilyReport, Input, IntersectReport, OneStepReport, ResolveReport, VerifyReport,
};
use orbitres::minors::{expand_family, family_minor_count, DEFAULT_MINOR_CAP};
use orbitres::orbit::{
    generic_extension, one_step_search, scheme_intersection_generators, split_sufficient, verify_vanishing,
    RankInvariant,
};
use orbitres::resolution::{min_resolution_check_with, DEFAULT_MAX_COLLECTIONS};
use orbitres::typea::{block_matrix, minor_generators, rank_conditions, relevance_certificates, MinorFamily};
use orbitres::{Error, QuiverClass};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "orbitres", version, about = "Resolutions and equations of quiver orbit closures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON input file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COLLECTIONS)]
    max_collections: usize,
    /// Samples per kind for `verify`.
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,
    /// Print every minor as an expanded polynomial (sizes up to 6).
    #[arg(long, global = true)]
    expand_minors: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Euler form of alpha, and the Euler products of beta and gamma when beta is given.
    Euler,
    /// Betti table of the one-step closure for (alpha, beta).
    Resolve,
    /// Minimal generating minors and rank conditions for (alpha, beta), type A.
    Equations,
    /// One-step detection for a representation given by matrices or summands.
    Onestep,
    /// Generators of the orbit closure of a representation as an intersection of one-step closures.
    Intersect,
    /// Checks that emitted minors vanish on sampled points of the closure.
    Verify,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { printed, error }) => {
            if let Some(p) = printed {
                print!("{p}");
            }
            eprintln!("orbitres: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 1,
        Error::Consistency(_) | Error::Certification(_) => 2,
        Error::DeskScale(_) => 3,
    }
}

struct Failure {
    printed: Option<String>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { printed: None, error }
    }
}

fn load(cli: &Cli) -> Result<Input, Error> {
    let path = cli.input.as_ref().ok_or_else(|| Error::input("--input is required"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    Input::from_json(&text)
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: impl FnOnce(&T) -> String) -> String {
    match cli.format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => text(report),
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let input = load(cli)?;
    match cli.command {
        Command::Euler => euler(cli, &input),
        Command::Resolve => resolve(cli, &input),
        Command::Equations => equations(cli, &input),
        Command::Onestep => onestep(cli, &input),
        Command::Intersect => intersect(cli, &input),
        Command::Verify => verify(cli, &input),
    }
}

fn class_name(c: QuiverClass) -> String {
    match c {
        QuiverClass::Dynkin(t) => t.to_string(),
        QuiverClass::ExtendedDynkin => "extended Dynkin".to_string(),
        QuiverClass::Wild => "wild".to_string(),
    }
}

fn euler(cli: &Cli, input: &Input) -> Result<String, Failure> {
    let q = input.quiver()?;
    let alpha = input.alpha()?;
    let (beta, gamma, beta_gamma) = match &input.beta {
        None => (None, None, None),
        Some(_) => {
            let spec = input.bundle_spec()?;
            let bg = (q.euler_product(&spec.beta, &spec.gamma)?, q.euler_product(&spec.gamma, &spec.beta)?);
            (Some(spec.beta), Some(spec.gamma), Some(bg))
        }
    };
    let report =
        EulerReport { class: class_name(q.class()), euler_form: q.euler_form(&alpha)?, alpha, beta, gamma, beta_gamma };
    Ok(emit(cli, &report, |r| {
        let mut s = format!("class: {}\nalpha: {:?}\neuler form: {}\n", r.class, r.alpha, r.euler_form);
        if let (Some(b), Some(g), Some((bg, gb))) = (&r.beta, &r.gamma, r.beta_gamma) {
            let _ = writeln!(s, "beta: {b:?}\ngamma: {g:?}\n<beta,gamma>: {bg}\n<gamma,beta>: {gb}");
        }
        s
    }))
}

fn resolve(cli: &Cli, input: &Input) -> Result<String, Failure> {
    let spec = input.bundle_spec()?;
    let check = min_resolution_check_with(&spec, cli.max_collections)?;
    let table = orbitres::resolution::Engine::new()
        .assemble(&spec, orbitres::resolution::EnumOptions { prune_at: None, max_collections: cli.max_collections })?;
    let report = ResolveReport {
        class: class_name(check.class),
        alpha: spec.alpha(),
        xi_rank: spec.rank(),
        beta: spec.beta.clone(),
        gamma: spec.gamma.clone(),
        note: check.note,
        table,
    };
    Ok(emit(cli, &report, |r| {
        let mut s = format!(
            "class: {}\nalpha: {:?}\nbeta: {:?}\ngamma: {:?}\nrank of xi: {}\n{}\n\n",
            r.class, r.alpha, r.beta, r.gamma, r.xi_rank, r.note
        );
        s.push_str(&r.table.to_text());
        s
    }))
}

fn family_line(f: &MinorFamily) -> String {
    let rc: Vec<String> = f.rc.iter().map(|(r, c)| format!("({r},{c})")).collect();
    format!(
        "root {} RC ({}) size {} degree {}: columns {:?} at sources {:?}, rows {:?} at sinks {:?}",
        f.root,
        rc.join(","),
        f.size,
        f.degree,
        f.column_counts,
        f.sources,
        f.row_counts,
        f.sinks
    )
}

fn equations(cli: &Cli, input: &Input) -> Result<String, Failure> {
    let spec = input.bundle_spec()?;
    let q = &spec.quiver;
    let alpha = spec.alpha();
    let relevance = relevance_certificates(q, &spec.beta, &spec.gamma, cli.seed)?;
    let conditions = rank_conditions(q, &spec.beta, &spec.gamma)?;
    let mut families = Vec::new();
    for f in minor_generators(q, &spec.beta, &spec.gamma)? {
        let b = block_matrix(q, f.root)?;
        let polynomials = if cli.expand_minors {
            let ps = expand_family(&b, &f, q, &alpha, DEFAULT_MINOR_CAP)?;
            Some(ps.iter().map(|p| p.to_string()).collect())
        } else {
            None
        };
        families.push(FamilyReport {
            bound: f.size - 1,
            minor_count: family_minor_count(&f, &alpha),
            block_matrix: b.render(),
            polynomials,
            family: f,
        });
    }
    let report = EquationsReport {
        seed: cli.seed,
        alpha,
        beta: spec.beta.clone(),
        gamma: spec.gamma.clone(),
        relevance,
        rank_conditions: conditions,
        families,
    };
    Ok(emit(cli, &report, |r| {
        let mut s = format!("seed: {}\nalpha: {:?}\nbeta: {:?}\ngamma: {:?}\n\n", r.seed, r.alpha, r.beta, r.gamma);
        s.push_str("relevance (root: combinatorial, inequalities, hom/ext):\n");
        for c in &r.relevance {
            let _ =
                writeln!(s, "  {}: {}, {}, {}", c.root, c.combinatorial, c.inequalities, c.representation_theoretic);
        }
        s.push_str("\nrank conditions:\n");
        for c in &r.rank_conditions {
            let _ = writeln!(s, "  rank X{} <= {}", c.root, c.bound);
        }
        s.push_str("\nminor families:\n");
        for f in &r.families {
            let _ = writeln!(s, "  {} ({} minors)", family_line(&f.family), f.minor_count);
            for line in f.block_matrix.lines() {
                let _ = writeln!(s, "    {line}");
            }
            for p in f.polynomials.iter().flatten() {
                let _ = writeln!(s, "    {p}");
            }
        }
        s
    }))
}

fn represented(input: &Input) -> Result<orbitres::Representation, Error> {
    input.representation()?.ok_or_else(|| Error::input("a representation is required: give matrices or summands"))
}

fn rank_line(r: &RankInvariant) -> String {
    r.ranks.iter().map(|(root, k)| format!("{root}={k}")).collect::<Vec<_>>().join(" ")
}

fn onestep(cli: &Cli, input: &Input) -> Result<String, Failure> {
    let x = represented(input)?;
    let q = x.quiver();
    let ranks = RankInvariant::of(&x)?;
    let one_step_beta = one_step_search(q, &ranks, cli.seed)?;
    let summands = input.summand_roots();
    let split = match &summands {
        Some(s) => split_sufficient(q, s)?,
        None => None,
    };
    let report = OneStepReport {
        seed: cli.seed,
        alpha: x.dim().clone(),
        ranks,
        one_step_beta,
        split_checked: summands.is_some(),
        split_sufficient: split,
    };
    Ok(emit(cli, &report, |r| {
        let mut s = format!("seed: {}\nalpha: {:?}\nranks: {}\n", r.seed, r.alpha, rank_line(&r.ranks));
        match &r.one_step_beta {
            Some(b) => {
                let _ = writeln!(s, "one-step: beta = {b:?}");
            }
            None => s.push_str("one-step: no\n"),
        }
        match (r.split_checked, &r.split_sufficient) {
            (true, Some(n)) => {
                let _ = writeln!(s, "split sufficient: dim N = {n:?}");
            }
            (true, None) => s.push_str("split sufficient: none\n"),
            (false, _) => {}
        }
        s
    }))
}

fn intersect(cli: &Cli, input: &Input) -> Result<String, Failure> {
    let y = represented(input)?;
    let result = scheme_intersection_generators(&y, cli.seed)?;
    let report = IntersectReport { seed: cli.seed, alpha: y.dim().clone(), result };
    Ok(emit(cli, &report, |r| {
        let mut s = format!("seed: {}\nalpha: {:?}\n", r.seed, r.alpha);
        for step in &r.result.steps {
            let _ = writeln!(s, "\np = {}: beta = {:?}", step.p, step.beta);
            for c in &step.rank_conditions {
                let _ = writeln!(s, "  rank X{} <= {}", c.root, c.bound);
            }
            let _ = writeln!(s, "  {} minor families", step.families.len());
        }
        s.push_str("\ncombined rank conditions:\n");
        for c in &r.result.rank_conditions {
            let _ = writeln!(s, "  rank X{} <= {}", c.root, c.bound);
        }
        s.push_str("combined minor families:\n");
        for f in &r.result.families {
            let _ = writeln!(s, "  {}", family_line(f));
        }
        s
    }))
}

fn verify(cli: &Cli, input: &Input) -> Result<String, Failure> {
    let (target, families, witness, kind) = match input.representation()? {
        Some(y) => {
            let fams = scheme_intersection_generators(&y, cli.seed)?.families;
            (y, fams, None, "representation")
        }
        None => {
            let spec = input.bundle_spec()?;
            let w = generic_extension(&spec.quiver, &spec.beta, &spec.gamma, cli.seed)?;
            let fams = minor_generators(&spec.quiver, &spec.beta, &spec.gamma)?;
            (w.generic_extension_rep.clone(), fams, Some(w), "generic-extension")
        }
    };
    let vr = verify_vanishing(&families, &target, witness.as_ref(), cli.trials, cli.seed)?;
    let pass = vr.pass;
    let report = VerifyReport {
        seed: cli.seed,
        alpha: target.dim().clone(),
        target: kind.to_string(),
        family_count: families.len(),
        report: vr,
    };
    let out = emit(cli, &report, |r| {
        format!(
            "seed: {}\nalpha: {:?}\ntarget: {}\nfamilies: {}\nsamples: {}\nevaluations: {}\nviolations: {}\nnonzero at ambient point: {:?}\nresult: {}\n",
            r.seed,
            r.alpha,
            r.target,
            r.family_count,
            r.report.samples,
            r.report.evaluations,
            r.report.violations,
            r.report.ambient_nonzero,
            if r.report.pass { "PASS" } else { "FAIL" }
        )
    });
    if pass {
        Ok(out)
    } else {
        Err(Failure { printed: Some(out), error: Error::consistency("vanishing check failed") })
    }
}
