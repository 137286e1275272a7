//! `lcg-engine`: run, classify, enumerate, collide and inspect Life patterns.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 resource limit or
//! partial result.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcg_core::formats::{emit_rle, load_catalog, parse_bytes, save_catalog, save_table, Format, PatternFile};
use lcg_core::{
    build_catalog, classify, collision_table, entry_for_cells, partition, Catalog, CatalogEntry, CatalogParameters,
    Classification, CollideConfig, Engine, Error, OrbitMode, Stepper, Universe,
};
use serde::Serialize;

use config::Config;

#[derive(Parser)]
#[command(name = "lcg-engine", version, about = "Live Cell Group analysis for Conway's Game of Life")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance a pattern and report the final generation.
    Run {
        file: PathBuf,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value = "fast")]
        engine: Engine,
        /// Input format; sniffed from the extension when omitted.
        #[arg(long)]
        format: Option<Format>,
        /// Write the final universe as RLE.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every Live Cell Group in a pattern.
    Classify {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value = "T")]
        mode: OrbitMode,
        #[arg(long)]
        format: Option<Format>,
        /// One JSON record per line instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate seeds up to K cells and write the catalog.
    Enumerate {
        #[arg(long)]
        cells: usize,
        #[arg(long)]
        budget: Option<u64>,
        /// Also classify branching offspring until nothing new appears.
        #[arg(long)]
        closure: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        entry_cap: Option<usize>,
    },
    /// Sweep all arrangements of two repeating patterns.
    Collide {
        /// Catalog id (or unique prefix) or a pattern file.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        window: u64,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print one catalog entry as RLE with metadata comments.
    Info {
        #[arg(long)]
        catalog: PathBuf,
        id: String,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PopulationLimit { .. } | Error::CoordinateOverflow => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::load().map_err(Failure::usage).and_then(|cfg| dispatch(cli.command, &cfg));
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("lcg-engine: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command, cfg: &Config) -> CmdResult {
    match cmd {
        Command::Run { file, steps, engine, format, out } => run(&file, steps, engine, format, out.as_deref(), cfg),
        Command::Classify { file, budget, mode, format, json } => {
            classify_cmd(&file, budget.unwrap_or(cfg.budget), mode, format, json, cfg)
        }
        Command::Enumerate { cells, budget, closure, out, entry_cap } => enumerate(
            cells,
            budget.unwrap_or(cfg.budget),
            closure,
            &out,
            entry_cap.unwrap_or(cfg.entry_cap),
            cfg,
        ),
        Command::Collide { a, b, window, horizon, catalog, out } => {
            collide(&a, &b, window, horizon, catalog.as_deref(), &out, cfg)
        }
        Command::Info { catalog, id } => info(&catalog, &id),
    }
}

fn read_pattern(path: &Path, format: Option<Format>) -> Result<PatternFile, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| Format::from_path(path));
    parse_bytes(&bytes, format).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run(file: &Path, steps: u64, engine: Engine, format: Option<Format>, out: Option<&Path>, cfg: &Config) -> CmdResult {
    let pattern = read_pattern(file, format)?;
    let stepper = Stepper::new(engine, cfg.population_limit);
    let end = stepper.step_n(&Universe::from_cells(pattern.cells), steps)?;
    println!("generation {}", end.generation());
    println!("population {}", end.population());
    match end.bounding_box() {
        Some(b) => println!("bounding box {b} ({}x{})", b.width(), b.height()),
        None => println!("bounding box none"),
    }
    if let Some(out) = out {
        let mut text = emit_rle(end.cells());
        text.push('\n');
        write_file(out, text.as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ClassifyRecord {
    id: String,
    anchor: [i64; 2],
    population: usize,
    classification: &'static str,
    transient: Option<u64>,
    period: Option<u64>,
    displacement: Option<[i64; 2]>,
    velocity: Option<[String; 2]>,
    length: Option<u64>,
    branch_at: Option<u64>,
    offspring: Option<Vec<String>>,
    budget: Option<u64>,
}

impl ClassifyRecord {
    fn new(id: String, anchor: [i64; 2], population: usize, c: &Classification) -> Self {
        let mut r = ClassifyRecord {
            id,
            anchor,
            population,
            classification: c.kind(),
            transient: None,
            period: None,
            displacement: None,
            velocity: c.velocity().map(|v| [v.dx.to_string(), v.dy.to_string()]),
            length: None,
            branch_at: None,
            offspring: None,
            budget: None,
        };
        match c {
            Classification::Terminating { length } => r.length = Some(*length),
            Classification::Repeating { transient, period, displacement } => {
                r.transient = Some(*transient);
                r.period = Some(*period);
                r.displacement = Some([displacement.0, displacement.1]);
            }
            Classification::Branching { at, offspring } => {
                r.branch_at = Some(*at);
                r.offspring = Some(offspring.iter().map(|o| o.id.hex()).collect());
            }
            Classification::Unresolved { budget } => r.budget = Some(*budget),
        }
        r
    }
}

fn classify_cmd(file: &Path, budget: u64, mode: OrbitMode, format: Option<Format>, json: bool, cfg: &Config) -> CmdResult {
    let pattern = read_pattern(file, format)?;
    let stepper = Stepper::new(Engine::Fast, cfg.population_limit);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for g in partition(&Universe::from_cells(pattern.cells)) {
        let record = classify(&g, budget, mode, &stepper)?;
        let a = g.anchor();
        if json {
            let r = ClassifyRecord::new(record.seed.hex(), [a.x, a.y], g.population(), &record.classification);
            let line = serde_json::to_string(&r).expect("records serialize");
            writeln!(out, "{line}")?;
        } else {
            writeln!(out, "{}", record.classification)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn enumerate(cells: usize, budget: u64, closure: bool, out: &Path, entry_cap: usize, cfg: &Config) -> CmdResult {
    if cells == 0 {
        return Err(Failure::usage("--cells must be at least 1"));
    }
    let stepper = Stepper::new(Engine::Fast, cfg.population_limit);
    let catalog = build_catalog(cells, budget, closure, entry_cap, &stepper)?;
    let mut bytes = Vec::new();
    save_catalog(&catalog, &mut bytes)?;
    write_file(out, &bytes)?;
    println!("entries {}", catalog.len());
    for (kind, n) in catalog.summary() {
        println!("{kind} {n}");
    }
    let mut periods = std::collections::BTreeMap::new();
    for e in catalog.entries() {
        if let Classification::Repeating { period, .. } = e.classification {
            *periods.entry(period).or_insert(0usize) += 1;
        }
    }
    for (p, n) in periods {
        println!("period {p}: {n}");
    }
    if !catalog.complete {
        eprintln!("lcg-engine: entry cap {entry_cap} reached; catalog is partial");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

/// Resolves `--a`/`--b`: an existing file is loaded and classified, anything
/// else is looked up as a catalog id.
fn resolve(arg: &str, catalog: &mut Catalog, budget: u64, stepper: &Stepper) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let pattern = read_pattern(path, None)?;
        let groups = partition(&Universe::from_cells(pattern.cells.clone()));
        if groups.len() != 1 {
            return Err(Failure::usage(format!("{arg}: expected one group, found {}", groups.len())));
        }
        let entry = entry_for_cells(&pattern.cells, budget, stepper)?;
        if !entry.classification.is_repeating() {
            return Err(Failure::usage(format!("{arg}: {}, not repeating", entry.classification)));
        }
        let hex = entry.hex();
        catalog.insert(entry);
        return Ok(hex);
    }
    match catalog.find_hex(arg) {
        Some(e) => Ok(e.hex()),
        None => Err(Failure::usage(format!("`{arg}` is neither a file nor a catalog id"))),
    }
}

fn collide(a: &str, b: &str, window: u64, horizon: u64, catalog: Option<&Path>, out: &Path, cfg: &Config) -> CmdResult {
    let mut cat = match catalog {
        Some(p) => {
            let f = fs::File::open(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            load_catalog(std::io::BufReader::new(f))?
        }
        None => Catalog::new(CatalogParameters { max_cells: 0, budget: cfg.budget, closure: false, entry_cap: cfg.entry_cap }),
    };
    let stepper = Stepper::new(Engine::Fast, cfg.population_limit);
    let a = resolve(a, &mut cat, cfg.budget, &stepper)?;
    let b = resolve(b, &mut cat, cfg.budget, &stepper)?;
    let collide_cfg = CollideConfig { stepper, ..CollideConfig::default() };
    let table = collision_table(&a, &b, window, horizon, &cat, &collide_cfg)?;
    let mut bytes = Vec::new();
    save_table(&table, &mut bytes)?;
    write_file(out, &bytes)?;
    let hist = table.histogram();
    let mut classes: Vec<(&String, &usize)> = hist.iter().collect();
    classes.sort_by(|x, y| y.1.cmp(x.1).then(x.0.cmp(y.0)));
    println!("rows {}", table.rows.len());
    for (label, n) in classes {
        println!("{n} {label}");
    }
    if !table.extensions.is_empty() {
        println!("new catalog entries {}", table.extensions.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn describe(e: &CatalogEntry) -> Vec<String> {
    let mut lines = vec![format!("N {}", e.hex()), format!("C population {}", e.population())];
    lines.push(format!("C {}", e.classification));
    if let Classification::Branching { offspring, .. } = &e.classification {
        for o in offspring {
            lines.push(format!("C offspring {} at ({},{})", o.id.hex(), o.offset.0, o.offset.1));
        }
    }
    if let Some(d) = &e.discovered_from {
        lines.push(format!("C discovered from {} at generation {}", d.parent, d.generation));
    }
    lines
}

fn info(catalog: &Path, id: &str) -> CmdResult {
    let f = fs::File::open(catalog).map_err(|e| Failure::usage(format!("{}: {e}", catalog.display())))?;
    let cat = load_catalog(std::io::BufReader::new(f))?;
    let e = cat.find_hex(id).ok_or_else(|| Failure::from(Error::UnknownId(id.to_string())))?;
    for line in describe(e) {
        println!("#{line}");
    }
    println!("{}", emit_rle(e.cells()));
    Ok(ExitCode::SUCCESS)
}
