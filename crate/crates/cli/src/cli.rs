//! The `design-sampler` command line.
//!
//! Exit status: 0 on success, 1 when the requested object provably does not
//! exist or an input fails verification, 2 on malformed input, 3 when a
//! bounded search gives up without an answer.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use sampling_core::containment::ContainmentError;
use sampling_core::designs::DesignError;
use sampling_core::groups::GroupError;
use sampling_core::nesting::{NestingError, SearchOutcome};
use sampling_core::sampler::{verify_embedding, Regularity, SamplerError};
use sampling_core::{
    closed_form_count, complete_design, compose, equivariance_violation, floor_sampling, lift_sampling, make_group,
    nesting_from_sampling, orbits, regular_embedding, regular_sampling, search_nesting, semiregular_sampling,
    triple_sampling, triple_starter, verify_design, verify_nesting, verify_sampling, wheels_from_nesting, BlockSet,
    LabeledGraph, PatternFamily, RedundancyProfile,
};

use crate::format::{
    parse_group, parse_pattern, read_json, to_json, BlockSetJson, FormatError, MapJson, NestingJson, OrbitTableJson,
    RowJson, Starter, StarterJson, WheelDesignJson,
};
use crate::report;

pub const MAX_N_VAR: &str = "DESIGN_SAMPLER_MAX_N";
pub const DEFAULT_MAX_N: usize = 25;
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "design-sampler", version, about = "Samplings and embeddings between complete graph designs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the complete design K_n(pattern).
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Family shorthand (K3, C4, P3, S4, W5) or a graph file.
        #[arg(long)]
        pattern: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Regular sampling K_n(big) -> K_n(small) from a perfect matching.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        big: String,
        #[arg(long)]
        small: String,
        /// Give every small block at least floor(|big|/|small|) preimages instead.
        #[arg(long)]
        floor: bool,
        /// Fail unless the redundancy equals this value.
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Regular embedding K_n(small) -> K_n(big).
    Embed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        small: String,
        #[arg(long)]
        big: String,
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// (1,2)-semiregular sampling K_n(big) -> K_n(small).
    Semiregular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        big: String,
        #[arg(long)]
        small: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Lift a starter file through its group and print the row table.
    Lift {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Orbits of a group on K_n(pattern).
    Orbits {
        #[arg(long)]
        n: usize,
        /// cyclic, affine or sym
        #[arg(long)]
        group: String,
        #[arg(long)]
        pattern: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Cyclic starter for a regular sampling of 3-subsets onto 2-subsets.
    Starter {
        #[arg(long)]
        n: usize,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Find (or check) a nesting of a cycle system and build its wheels.
    Nest {
        #[arg(long = "in")]
        input: PathBuf,
        /// Node budget for the search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Also write the wheel design here.
        #[arg(long)]
        wheels: Option<PathBuf>,
    },
    /// Check a sampling, embedding, design or nesting file.
    #[command(group(ArgGroup::new("what").required(true).args(["sampling", "embedding", "design", "nesting"])))]
    Verify {
        #[arg(long)]
        sampling: Option<PathBuf>,
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long)]
        nesting: Option<PathBuf>,
    },
    /// Compose two samplings: source of the first to target of the second.
    Compose {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Nonexistence(String),
    Undecided(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Nonexistence(_) => 1,
            Failure::Input(_) => 2,
            Failure::Undecided(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Nonexistence(m) | Failure::Undecided(m) => m,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Nesting(n) => n.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SamplerError> for Failure {
    fn from(e: SamplerError) -> Self {
        let msg = e.to_string();
        match e {
            SamplerError::Design(d) => d.into(),
            SamplerError::Containment(ContainmentError::HostMismatch)
            | SamplerError::LengthMismatch { .. }
            | SamplerError::IndexOutOfRange { .. }
            | SamplerError::MidMismatch
            | SamplerError::TooManyBlocks(_) => Failure::Input(msg),
            _ => Failure::Nonexistence(msg),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        let msg = e.to_string();
        match e {
            GroupError::Sampler(s) => s.into(),
            GroupError::Design(d) => d.into(),
            GroupError::NotPrime(_)
            | GroupError::EmptyDegree
            | GroupError::Perm(_)
            | GroupError::NotClosed { .. }
            | GroupError::NotInClass(_) => Failure::Input(msg),
            _ => Failure::Nonexistence(msg),
        }
    }
}

impl From<NestingError> for Failure {
    fn from(e: NestingError) -> Self {
        let msg = e.to_string();
        match e {
            NestingError::Sampler(s) => s.into(),
            NestingError::InvalidNesting(_) => Failure::Nonexistence(msg),
            NestingError::BudgetExceeded(_) => Failure::Undecided(msg),
            _ => Failure::Input(msg),
        }
    }
}

/// Runs one command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let max_n = max_n()?;
    let check_n = |n: usize| {
        if n > max_n {
            Err(Failure::Input(format!("n = {n} exceeds the enumeration cap {max_n} (set {MAX_N_VAR} to raise it)")))
        } else {
            Ok(())
        }
    };
    match cli.command {
        Command::Enumerate { n, pattern, out: path } => {
            check_n(n)?;
            let p = parse_pattern(&pattern)?;
            let design = complete_design(n, &p)?;
            let coverage = verify_design(&design);
            assert!(coverage.holds, "complete designs cover uniformly");
            let closed = pattern
                .parse::<PatternFamily>()
                .ok()
                .and_then(|f| closed_form_count(n, f).ok())
                .map(|c| format!(", closed form {c}"))
                .unwrap_or_default();
            say(out, &format!("K_{n}({pattern}): {} blocks{closed}, multiplicity {}\n", design.len(), design.multiplicity()))?;
            emit(path.as_deref(), &to_json(&BlockSetJson::from(&design)), out)
        }
        Command::Sample { n, big, small, floor, lambda, out: path } => {
            check_n(n)?;
            let (b, s) = (parse_pattern(&big)?, parse_pattern(&small)?);
            let sm = if floor { floor_sampling(n, &b, &s)? } else { regular_sampling(n, &b, &s)? };
            let profile = verify_sampling(&sm)?;
            say(out, &report::profile(&profile))?;
            expect_lambda(&profile, lambda)?;
            emit(path.as_deref(), &to_json(&MapJson::from_sampling(&sm, &profile)), out)
        }
        Command::Embed { n, small, big, lambda, out: path } => {
            check_n(n)?;
            let (s, b) = (parse_pattern(&small)?, parse_pattern(&big)?);
            let em = regular_embedding(n, &s, &b)?;
            let profile = verify_embedding(&em)?;
            let strict = if em.is_strict() { "strict " } else { "" };
            say(out, &format!("{strict}embedding of {} blocks into {}\n", em.source().len(), em.target().len()))?;
            say(out, &report::profile(&profile))?;
            expect_lambda(&profile, lambda)?;
            emit(path.as_deref(), &to_json(&MapJson::from_embedding(&em, &profile)), out)
        }
        Command::Semiregular { n, big, small, out: path } => {
            check_n(n)?;
            let (b, s) = (parse_pattern(&big)?, parse_pattern(&small)?);
            let sm = semiregular_sampling(n, &b, &s)?;
            let profile = verify_sampling(&sm)?;
            say(out, &report::profile(&profile))?;
            emit(path.as_deref(), &to_json(&MapJson::from_sampling(&sm, &profile)), out)
        }
        Command::Lift { input, lambda, out: path } => {
            let j: StarterJson = read_json(&input)?;
            check_n(j.n)?;
            let starter = Starter::try_from(&j)?;
            let g = make_group(starter.group, starter.n)?;
            let big = orbits(&g, complete_design(starter.n, &starter.big.graph())?.blocks())?;
            let small = orbits(&g, complete_design(starter.n, &starter.small.graph())?.blocks())?;
            let lifted = lift_sampling(&g, &big, &small, &starter.graphs)?;
            let profile = verify_sampling(&lifted.sampling)?;
            if let Some((e, t)) = equivariance_violation(&g, &lifted.sampling)? {
                return Err(Failure::Nonexistence(format!("lifted map is not equivariant (element {e}, block {t})")));
            }
            say(out, &report::lift_table(&starter, &small, g.order(), lifted.lambda).to_string())?;
            say(out, &report::profile(&profile))?;
            expect_lambda(&profile, lambda)?;
            emit(path.as_deref(), &to_json(&MapJson::from_sampling(&lifted.sampling, &profile)), out)
        }
        Command::Orbits { n, group, pattern, out: path } => {
            check_n(n)?;
            let g = make_group(parse_group(&group)?, n)?;
            let p = parse_pattern(&pattern)?;
            let dec = orbits(&g, complete_design(n, &p)?.blocks())?;
            let table = OrbitTableJson::new(&g, &dec);
            say(out, &format!("{} orbits of a group of order {} on K_{n}({pattern})\n", dec.orbit_count(), g.order()))?;
            for o in &table.orbits {
                let edges: Vec<String> = o.rep.edges.iter().map(|e| format!("{}{}", e[0], e[1])).collect();
                say(out, &format!("  {{{}}} size {} stab {}\n", edges.join(" "), o.size, o.stab))?;
            }
            emit(path.as_deref(), &to_json(&table), out)
        }
        Command::Starter { n, out: path } => {
            check_n(n)?;
            let s = triple_starter(n)?;
            say(out, &report::starter_table(&s).to_string())?;
            let lifted = triple_sampling(n)?;
            let profile = verify_sampling(&lifted.sampling)?;
            say(out, &report::profile(&profile))?;
            emit(path.as_deref(), &to_json(&starter_file(&s)), out)
        }
        Command::Nest { input, budget, out: path, wheels } => {
            let j: NestingJson = read_json(&input)?;
            let cs = j.cycle_system()?;
            let f = match j.assignment() {
                Some(f) => f,
                None => match search_nesting(&cs, budget)? {
                    SearchOutcome::Found(f) => f,
                    SearchOutcome::NoneExists => {
                        return Err(Failure::Nonexistence("the cycle system has no nesting".into()));
                    }
                },
            };
            let nested = wheels_from_nesting(&cs, &f)?;
            let back = nesting_from_sampling(&nested.wheels, &nested.to_stars)?;
            assert_eq!(back, (cs.clone(), f.clone()), "wheel round trip recovers the nesting");
            say(out, &format!("nesting of {} {}-cycles on {} points: hubs {:?}\n", cs.len(), cs.m(), cs.n(), f.hubs))?;
            say(out, &format!("{} wheels cover every edge twice\n", nested.wheels.wheels.len()))?;
            if let Some(w) = wheels {
                write_file(&w, &to_json(&WheelDesignJson::from(&nested.wheels)))?;
            }
            emit(path.as_deref(), &to_json(&NestingJson::new(&cs, Some(&f))), out)
        }
        Command::Verify { sampling, embedding, design, nesting } => {
            if let Some(p) = sampling {
                let j: MapJson = read_json(&p)?;
                let profile = verify_sampling(&j.to_sampling()?)?;
                say(out, &report::profile(&profile))?;
                check_stored(&j, &profile)
            } else if let Some(p) = embedding {
                let j: MapJson = read_json(&p)?;
                let em = j.to_embedding()?;
                let profile = verify_embedding(&em)?;
                say(out, &report::profile(&profile))?;
                check_stored(&j, &profile)
            } else if let Some(p) = design {
                let j: BlockSetJson = read_json(&p)?;
                verify_block_set(&BlockSet::try_from(&j)?, out)
            } else if let Some(p) = nesting {
                let j: NestingJson = read_json(&p)?;
                let cs = j.cycle_system()?;
                verify_block_set(&cs.design(), out)?;
                if let Some(f) = j.assignment() {
                    let r = verify_nesting(&cs, &f)?;
                    if !r.holds {
                        return Err(NestingError::InvalidNesting(r).into());
                    }
                    wheels_from_nesting(&cs, &f)?;
                    say(out, "hubs form a nesting\n")?;
                }
                Ok(())
            } else {
                unreachable!("clap requires one input")
            }
        }
        Command::Compose { first, second, out: path } => {
            let a: MapJson = read_json(&first)?;
            let b: MapJson = read_json(&second)?;
            let sm = compose(&a.to_sampling()?, &b.to_sampling()?)?;
            let profile = verify_sampling(&sm)?;
            say(out, &report::profile(&profile))?;
            emit(path.as_deref(), &to_json(&MapJson::from_sampling(&sm, &profile)), out)
        }
    }
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("{MAX_N_VAR} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn expect_lambda(profile: &RedundancyProfile, lambda: Option<usize>) -> Result<(), Failure> {
    match lambda {
        Some(l) if profile.regularity() != Regularity::Regular(l) => Err(Failure::Nonexistence(format!(
            "expected regular({l}), got {}",
            report::regularity(profile)
        ))),
        _ => Ok(()),
    }
}

fn check_stored(j: &MapJson, profile: &RedundancyProfile) -> Result<(), Failure> {
    if (j.profile.min, j.profile.max) != (profile.min, profile.max) {
        return Err(Failure::Nonexistence(format!(
            "stored profile {}..{} disagrees with the computed {}..{}",
            j.profile.min, j.profile.max, profile.min, profile.max
        )));
    }
    Ok(())
}

fn verify_block_set(bs: &BlockSet, out: &mut dyn Write) -> Result<(), Failure> {
    let r = verify_design(bs);
    if r.holds {
        say(out, &format!("design holds: {} blocks, every edge covered {} times\n", bs.len(), r.multiplicity))
    } else {
        Err(Failure::Nonexistence(format!(
            "not a design with multiplicity {}: {} edges under-covered, {} over-covered, {} stray blocks",
            r.multiplicity,
            r.under.len(),
            r.over.len(),
            r.stray_blocks.len()
        )))
    }
}

fn starter_file(s: &sampling_core::TripleStarter) -> StarterJson {
    let mut seen = std::collections::BTreeSet::new();
    let rows = s
        .families()
        .iter()
        .flat_map(|(_, fam)| fam.iter())
        .filter(|t| seen.insert(LabeledGraph::complete_on(s.n, &t[..])))
        .map(|t| RowJson { block: t.to_vec(), sample: t[..2].to_vec() })
        .collect();
    StarterJson { n: s.n, group: "cyclic".into(), big: "K3".into(), small: "K2".into(), rows }
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or to `out` when the path is `-`.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        None => Ok(()),
        Some(p) if p == Path::new("-") => say(out, text),
        Some(p) => write_file(p, text),
    }
}

/// Parses `args`, runs, and reports failures on stderr.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}
