use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qwt_core::{BinaryWaveletMatrix, FmCountIndex, QuadGeometry, QuadWaveletMatrix};
use qwt_cli::bench::{run_suite, BenchReport, SpaceBreakdown, Target};
use qwt_cli::index_file::{read_index, write_index, Index};
use qwt_cli::ingest::{ingest, read_prefix};
use qwt_cli::workload::{generate, QueryKind};
use qwt_cli::{selftest, CliError, Result};

#[derive(Parser)]
#[command(name = "qwt", version, about = "Quad wavelet matrix indexes and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index over a file.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Block size of the quad vectors in symbols.
        #[arg(long, default_value_t = 512, value_parser = parse_geometry)]
        geometry: u32,
        /// Store a rank predictor for prefetching.
        #[arg(long)]
        prefetch: bool,
        /// Predictor block size in symbols.
        #[arg(long, default_value_t = qwt_core::predictor::DEFAULT_BLOCK)]
        epsilon: usize,
        /// Read at most this many bytes.
        #[arg(long)]
        limit: Option<u64>,
        /// Index the BWT for pattern counting instead of the text itself.
        #[arg(long)]
        fm: bool,
    },
    /// Answer a single query.
    Query {
        index: PathBuf,
        #[arg(long, value_enum)]
        kind: QueryKind,
        /// Position for access and rank, occurrence number for select.
        #[arg(long)]
        pos: usize,
        /// A single character or a byte value.
        #[arg(long)]
        sym: Option<String>,
    },
    /// Time a generated workload.
    Bench {
        index: PathBuf,
        #[arg(long, value_enum)]
        kind: QueryKind,
        #[arg(long, default_value_t = 1_000_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        chained: bool,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also time a binary wavelet matrix over the same sequence.
        #[arg(long)]
        binwm: bool,
    },
    /// Print size and shape of an index as JSON.
    Stats { index: PathBuf },
    /// Count occurrences of a pattern in an index built with --fm.
    Search {
        index: PathBuf,
        #[arg(long)]
        pattern: String,
    },
    /// Run the built-in oracle suites.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_geometry(s: &str) -> std::result::Result<u32, String> {
    match s {
        "256" => Ok(256),
        "512" => Ok(512),
        _ => Err("expected 256 or 512".into()),
    }
}

fn geometry(block: u32) -> QuadGeometry {
    if block == 256 {
        QuadGeometry::Sb2048B256
    } else {
        QuadGeometry::Sb4096B512
    }
}

fn parse_symbol(index: &Index, sym: &str) -> Result<Option<u32>> {
    let byte = if sym.chars().count() == 1 && !sym.chars().all(|c| c.is_ascii_digit()) {
        let c = sym.chars().next().unwrap();
        u8::try_from(c as u32).map_err(|_| CliError::Invalid(format!("symbol {sym:?} is not a byte")))?
    } else {
        sym.parse::<u8>().map_err(|_| CliError::Invalid(format!("symbol {sym:?} is neither a character nor a byte value")))?
    };
    Ok(index.code(byte))
}

fn build(
    input: PathBuf,
    output: PathBuf,
    block: u32,
    prefetch: bool,
    epsilon: usize,
    limit: Option<u64>,
    fm: bool,
) -> Result<()> {
    let g = geometry(block);
    let mut index = if fm {
        let bytes = read_prefix(&input, limit)?;
        if bytes.is_empty() {
            return Err(CliError::Invalid(format!("{}: empty input", input.display())));
        }
        Index::Fm(FmCountIndex::new(&bytes, g)?)
    } else {
        let corpus = ingest(&input, limit)?;
        Index::Plain(QuadWaveletMatrix::with_alphabet(&corpus.codes, corpus.alphabet, g)?)
    };
    if prefetch {
        index.matrix_mut().build_predictor(epsilon)?;
    }
    write_index(&output, &index)?;
    let m = index.matrix();
    println!(
        "{}",
        json!({ "index": output, "kind": index.kind(), "n": m.len(), "sigma": m.sigma(), "levels": m.levels(), "bits": m.size_in_bits() })
    );
    Ok(())
}

fn query(path: PathBuf, kind: QueryKind, pos: usize, sym: Option<String>) -> Result<()> {
    let index = read_index(&path)?;
    let m = index.matrix();
    let symbol = match (kind, sym) {
        (QueryKind::Access, _) => None,
        (_, Some(s)) => Some(parse_symbol(&index, &s)?),
        (_, None) => return Err(CliError::Invalid(format!("--sym is required for {}", kind.name()))),
    };
    let answer = match (kind, symbol) {
        (QueryKind::Access, _) => {
            let code = m.access(pos)?;
            let out = match index.byte(code) {
                Some(b) => json!({ "kind": "access", "pos": pos, "code": code, "byte": b, "char": (b as char).to_string() }),
                None => json!({ "kind": "access", "pos": pos, "code": code, "sentinel": true }),
            };
            println!("{out}");
            return Ok(());
        }
        // a symbol absent from the index never occurs
        (QueryKind::Rank, Some(None)) => {
            m.rank(0, pos)?;
            0
        }
        (QueryKind::Rank, Some(Some(c))) => m.rank(c, pos)?,
        (QueryKind::Select, Some(None)) => return Err(CliError::Invalid("symbol does not occur".into())),
        (QueryKind::Select, Some(Some(c))) => m.select(c, pos)?,
        _ => unreachable!(),
    };
    println!("{}", json!({ "kind": kind.name(), "pos": pos, "answer": answer }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    path: PathBuf,
    kind: QueryKind,
    count: usize,
    seed: u64,
    chained: bool,
    reps: usize,
    format: Format,
    binwm: bool,
) -> Result<()> {
    let index = read_index(&path)?;
    let m = index.matrix();
    let w = generate(m, kind, count, seed, chained)?;
    let wm = if binwm {
        let text: Vec<u16> = (0..m.len()).map(|i| m.access(i).map(|c| c as u16)).collect::<qwt_core::Result<_>>()?;
        Some(BinaryWaveletMatrix::new(&text, m.sigma())?)
    } else {
        None
    };
    let mut targets = vec![Target::Qwm(m)];
    if m.predictor().is_some() && kind == QueryKind::Rank {
        targets.push(Target::QwmPrefetch(m));
    }
    if let Some(wm) = &wm {
        targets.push(Target::BinWm(wm));
    }
    let reports = run_suite(&targets, &w, reps)?;
    let mut out = io::stdout().lock();
    let r = match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports).expect("reports serialize")),
        Format::Csv => {
            writeln!(out, "{}", BenchReport::CSV_HEADER).and_then(|_| reports.iter().try_for_each(|r| writeln!(out, "{}", r.csv_row())))
        }
    };
    r.map_err(|e| CliError::io("<stdout>", e))
}

fn stats(path: PathBuf) -> Result<()> {
    let index = read_index(&path)?;
    let m = index.matrix();
    let space = SpaceBreakdown::of_matrix(m);
    let n = m.len().max(1) as f64;
    let out = json!({
        "kind": index.kind(),
        "n": m.len(),
        "sigma": m.sigma(),
        "bit_width": m.bit_width(),
        "levels": m.levels(),
        "quad_levels": m.quad_levels(),
        "tail_level": m.tail_plane().is_some(),
        "block": m.block_len(),
        "predictor_block": m.predictor().map(|p| p.block_len()),
        "space": space,
        "bits_per_symbol": space.total_bits as f64 / n,
        "predictor_bits_per_symbol": space.predictor_bits as f64 / n,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("stats serialize"));
    Ok(())
}

fn search(path: PathBuf, pattern: String) -> Result<()> {
    let Index::Fm(ix) = read_index(&path)? else {
        return Err(CliError::Invalid("index was not built with --fm".into()));
    };
    if pattern.is_empty() {
        return Err(CliError::Invalid("empty pattern".into()));
    }
    let count = if ix.matrix().predictor().is_some() {
        ix.backward_search_prefetch(pattern.as_bytes())
    } else {
        ix.backward_search(pattern.as_bytes())
    }
    .map_or(0, |(lo, hi)| hi + 1 - lo);
    println!("{}", json!({ "pattern": pattern, "count": count }));
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { input, output, geometry, prefetch, epsilon, limit, fm } => {
            build(input, output, geometry, prefetch, epsilon, limit, fm)?
        }
        Command::Query { index, kind, pos, sym } => query(index, kind, pos, sym)?,
        Command::Bench { index, kind, count, seed, chained, reps, format, binwm } => {
            bench(index, kind, count, seed, chained, reps, format, binwm)?
        }
        Command::Stats { index } => stats(index)?,
        Command::Search { index, pattern } => search(index, pattern)?,
        Command::Selftest => return selftest::run(&mut io::stdout().lock()).map_err(|e| CliError::io("<stdout>", e)),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qwt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
