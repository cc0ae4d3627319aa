use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ddcat_core::fixtures::{self, Family};
use ddcat_core::*;

#[derive(Parser)]
#[command(
    name = "ddcat",
    version,
    about = "Equality of 2-cells in free double categories"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether two expressions or diagrams denote the same 2-cell
    Check {
        #[arg(short, long)]
        sig: PathBuf,
        a: PathBuf,
        b: PathBuf,
    },
    /// Print the exchange normal form of an expression or diagram
    Normalize {
        #[arg(short, long)]
        sig: PathBuf,
        input: PathBuf,
    },
    /// Print the layered diagram of an expression
    Translate {
        #[arg(short, long)]
        sig: PathBuf,
        input: PathBuf,
    },
    /// Reconstruct the tiling of an admissible diagram
    Tile {
        #[arg(short, long)]
        sig: PathBuf,
        input: PathBuf,
    },
    /// Read a rectangular tiling back as an expression
    Extract {
        #[arg(short, long)]
        sig: PathBuf,
        input: PathBuf,
    },
    /// Draw an expression, diagram or tiling as SVG
    Render {
        #[arg(short, long)]
        sig: PathBuf,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Time `check` on a scalable family; prints CSV
    Bench {
        #[arg(long, default_value = "chain")]
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append level and wire counts
        #[arg(long)]
        edges: bool,
    },
}

enum Input {
    Expr(CellExpr),
    Diagram(LayeredDiagram),
    Tiling(PartialTiling),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_sig(path: &Path) -> Result<DoubleSignature> {
    load_signature(&read(path)?).with_context(|| format!("bad signature {}", path.display()))
}

/// JSON documents with a `cells` field are tilings, other JSON documents
/// diagrams, anything else expression text.
fn load_input(path: &Path, sig: &DoubleSignature, sig2: &Sig2) -> Result<Input> {
    let text = read(path)?;
    let ctx = || format!("bad input {}", path.display());
    if !text.trim_start().starts_with('{') {
        return Ok(Input::Expr(parse_expr(&text, sig).with_context(ctx)?));
    }
    let v: serde_json::Value = serde_json::from_str(&text).with_context(ctx)?;
    if v.get("cells").is_some() {
        Ok(Input::Tiling(load_tiling(&text, sig).with_context(ctx)?))
    } else {
        Ok(Input::Diagram(load_diagram(&text, sig2).with_context(ctx)?))
    }
}

fn diagram_of(input: Input, sig: &DoubleSignature) -> Result<LayeredDiagram> {
    match input {
        Input::Expr(e) => Ok(translate_expr(&e, sig)?),
        Input::Diagram(d) => Ok(d),
        Input::Tiling(_) => bail!("expected an expression or a diagram, found a tiling"),
    }
}

struct Paint(bool);

impl Paint {
    fn new() -> Self {
        let off = std::env::var("DDCAT_COLOR")
            .map(|v| v == "0")
            .unwrap_or(false);
        Paint(!off && std::io::stdout().is_terminal())
    }

    fn verdict(&self, text: &str, good: bool) -> String {
        match (self.0, good) {
            (false, _) => text.to_string(),
            (true, true) => format!("\x1b[32m{text}\x1b[0m"),
            (true, false) => format!("\x1b[31m{text}\x1b[0m"),
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let paint = Paint::new();
    match cli.cmd {
        Cmd::Check { sig, a, b } => {
            let sig = load_sig(&sig)?;
            let s2 = Sig2::from_signature(&sig);
            let da = diagram_of(load_input(&a, &sig, &s2)?, &sig)?;
            let db = diagram_of(load_input(&b, &sig, &s2)?, &sig)?;
            let v = compare_diagrams(&da, &db, &s2)?;
            let word = if v.is_equal() { "EQUAL" } else { "NOT-EQUAL" };
            println!("{}", paint.verdict(word, v.is_equal()));
            println!("{}", v.reason());
            Ok(if v.is_equal() { 0 } else { 1 })
        }
        Cmd::Normalize { sig, input } => {
            let sig = load_sig(&sig)?;
            let s2 = Sig2::from_signature(&sig);
            let d = diagram_of(load_input(&input, &sig, &s2)?, &sig)?;
            println!("{}", emit_diagram(&normalize(&d, &s2)?.diagram));
            Ok(0)
        }
        Cmd::Translate { sig, input } => {
            let sig = load_sig(&sig)?;
            let s2 = Sig2::from_signature(&sig);
            match load_input(&input, &sig, &s2)? {
                Input::Expr(e) => println!("{}", emit_diagram(&translate_expr(&e, &sig)?)),
                _ => bail!("translate expects an expression"),
            }
            Ok(0)
        }
        Cmd::Tile { sig, input } => {
            let sig = load_sig(&sig)?;
            let s2 = Sig2::from_signature(&sig);
            let d = diagram_of(load_input(&input, &sig, &s2)?, &sig)?;
            if !is_admissible(&d, &s2) {
                bail!("diagram is not admissible");
            }
            let m = reconstruct(&d, &sig)?;
            println!("{}", emit_tiling(&m, &sig)?);
            let ok = is_binary_composable(&m, &sig)?;
            println!(
                "{}",
                paint.verdict(if ok { "COMPOSABLE" } else { "PINWHEEL" }, ok)
            );
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Extract { sig, input } => {
            let sig = load_sig(&sig)?;
            let s2 = Sig2::from_signature(&sig);
            let Input::Tiling(m) = load_input(&input, &sig, &s2)? else {
                bail!("extract expects a tiling document");
            };
            match extract_expr(&m, &sig)? {
                Extracted::Composable(e) => {
                    println!("{}", print_expr(&e));
                    Ok(0)
                }
                Extracted::NotBinaryComposable { .. } => {
                    println!("{}", paint.verdict("NOT-BINARY-COMPOSABLE", false));
                    Ok(1)
                }
            }
        }
        Cmd::Render { sig, input, output } => {
            let sig = load_sig(&sig)?;
            let s2 = Sig2::from_signature(&sig);
            let svg = match load_input(&input, &sig, &s2)? {
                Input::Tiling(m) => render_tiling_svg(&m),
                other => render_diagram_svg(&diagram_of(other, &sig)?, &s2)?,
            };
            fs::write(&output, svg)
                .with_context(|| format!("cannot write {}", output.display()))?;
            Ok(0)
        }
        Cmd::Bench {
            family,
            sizes,
            seed,
            edges,
        } => {
            let family: Family = family.parse()?;
            bench(family, &sizes, seed, edges)?;
            Ok(0)
        }
    }
}

/// Mean wall time of one `check`, repeated until 20 ms have passed.
fn time_check(e1: &CellExpr, e2: &CellExpr, sig: &DoubleSignature) -> Result<Duration> {
    let start = Instant::now();
    let mut reps = 0u32;
    while reps == 0 || start.elapsed() < Duration::from_millis(20) {
        if !decide_eq_exprs(e1, e2, sig)? {
            bail!("bracketings of one family member compared unequal");
        }
        reps += 1;
    }
    Ok(start.elapsed() / reps)
}

fn bench(family: Family, sizes: &[usize], seed: u64, edges: bool) -> Result<()> {
    if sizes.is_empty() {
        bail!("no sizes given");
    }
    println!(
        "n,swap_count,wall_ms{}",
        if edges { ",vertices,edges" } else { "" }
    );
    for &n in sizes {
        let (sig, e1, e2) = fixtures::family(family, n, seed)?;
        let s2 = Sig2::from_signature(&sig);
        let d = translate_expr(&e1, &sig)?;
        let swaps = normalize(&d, &s2)?.swaps;
        let wall = time_check(&e1, &e2, &sig)?;
        print!("{n},{swaps},{:.4}", wall.as_secs_f64() * 1e3);
        if edges {
            let wires: usize = d.domain.len()
                + d.levels
                    .iter()
                    .map(|l| s2.ty(&l.cell).map(|t| t.output.len()))
                    .sum::<ddcat_core::Result<usize>>()?;
            print!(",{},{wires}", d.levels.len());
        }
        println!();
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
