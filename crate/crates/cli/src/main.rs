//! `upb`: generate, verify, certify and graph product bases.
//!
//! Exit codes: 0 = certified claim holds, 1 = claim fails,
//! 2 = inconclusive / budget exhausted, 3 = input error.

mod document;

use clap::{Parser, Subcommand};
use document::BasisDocument;
use std::path::{Path, PathBuf};
use upb_core::basis::{build_graph, lower_bound_size};
use upb_core::constructions::{self, Family33Params};
use upb_core::entangle::{certify_with_extension, Certificate};
use upb_core::extend::{is_extendible, is_extendible_unpruned, ExtendVerdict};
use upb_core::{ProductBasis, Tolerance};

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_INCONCLUSIVE: i32 = 2;
const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(name = "upb", about = "Unextendible product basis toolkit", version)]
struct Cli {
    /// Numerical tolerance for orthogonality and eigenvalue checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for the parallel search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a named basis and write it as a JSON document.
    Generate {
        /// One of: pyramid, tiles, family33, pyr34, pyr34plus, shifts,
        /// genshifts, gentiles1, gentiles2, sept, genpyramid, quadres,
        /// tensor, sept-counterexample.
        name: String,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// genshifts: order k >= 2.
        #[arg(long)]
        k: Option<usize>,
        /// gentiles1: even dimension n >= 4; gentiles2: Bob's dimension n.
        #[arg(long)]
        n: Option<usize>,
        /// gentiles2: Alice's dimension m.
        #[arg(long)]
        m: Option<usize>,
        /// quadres: prime p = 1 mod 4.
        #[arg(long)]
        p: Option<usize>,
        /// genpyramid: number of parties (p = 2*parties + 1 must be prime).
        #[arg(long)]
        parties: Option<usize>,
        /// genpyramid: offset with pi/2 <= 2*pi*offset/p <= pi.
        #[arg(long)]
        offset: Option<usize>,
        /// family33 angles (defaults: the pyramid parameter point).
        #[arg(long)]
        gamma_a: Option<f64>,
        #[arg(long)]
        theta_a: Option<f64>,
        #[arg(long)]
        phi_a: Option<f64>,
        #[arg(long)]
        gamma_b: Option<f64>,
        #[arg(long)]
        theta_b: Option<f64>,
        #[arg(long)]
        phi_b: Option<f64>,
        /// family33 margin on |cos/sin| of theta and gamma (0 disables).
        #[arg(long)]
        margin: Option<f64>,
        /// tensor: paths to the two bipartite input documents.
        #[arg(long)]
        left: Option<PathBuf>,
        #[arg(long)]
        right: Option<PathBuf>,
    },
    /// Check orthogonality, the size lower bound, and extendibility.
    Verify {
        path: PathBuf,
        /// Node budget for the pruned search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Enumerate all m^n partition assignments without pruning.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Classify the complementary state rho-bar of the basis.
    Certify {
        path: PathBuf,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Search for completions in this larger space, e.g. --extend 3,5.
        #[arg(long, value_delimiter = ',')]
        extend: Option<Vec<usize>>,
    },
    /// Export the orthogonality graph as DOT.
    Graph {
        path: PathBuf,
        /// Output DOT path (stdout when omitted).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: building thread pool: {e}");
            std::process::exit(EXIT_INPUT);
        }
    }
    let tol = match cli.tol {
        None => Tolerance::default(),
        Some(eps) => match Tolerance::new(eps) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                std::process::exit(EXIT_INPUT);
            }
        },
    };
    let code = match cli.cmd {
        Cmd::Generate { .. } => cmd_generate(&cli.cmd, tol),
        Cmd::Verify {
            ref path,
            budget,
            exhaustive,
        } => cmd_verify(path, budget, exhaustive, tol),
        Cmd::Certify {
            ref path,
            budget,
            ref extend,
        } => cmd_certify(path, budget, extend.as_deref(), tol),
        Cmd::Graph { ref path, ref dot } => cmd_graph(path, dot.as_deref(), tol),
    };
    std::process::exit(code);
}

fn load_basis(path: &Path, tol: Tolerance) -> Result<ProductBasis, i32> {
    let doc = BasisDocument::load(path).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })?;
    doc.to_basis(tol).map_err(|e| {
        eprintln!("error: basis verification failed: {e}");
        EXIT_FAIL
    })
}

fn cmd_generate(cmd: &Cmd, tol: Tolerance) -> i32 {
    let Cmd::Generate {
        name,
        out,
        k,
        n,
        m,
        p,
        parties,
        offset,
        gamma_a,
        theta_a,
        phi_a,
        gamma_b,
        theta_b,
        phi_b,
        margin,
        left,
        right,
    } = cmd
    else {
        unreachable!("dispatched on Generate");
    };
    let require = |opt: &Option<usize>, flag: &str| {
        opt.ok_or_else(|| format!("{name} requires --{flag}"))
    };
    let built: Result<ProductBasis, String> = match name.as_str() {
        "pyramid" => Ok(constructions::pyramid()),
        "tiles" => Ok(constructions::tiles()),
        "family33" => {
            let base = Family33Params::pyramid_point();
            let params = Family33Params::new(
                gamma_a.unwrap_or(base.gamma_a),
                theta_a.unwrap_or(base.theta_a),
                phi_a.unwrap_or(base.phi_a),
                gamma_b.unwrap_or(base.gamma_b),
                theta_b.unwrap_or(base.theta_b),
                phi_b.unwrap_or(base.phi_b),
            )
            .with_margin(margin.unwrap_or(1e-3));
            constructions::family33(params).map_err(|e| e.to_string())
        }
        "pyr34" => Ok(constructions::pyr34()),
        "pyr34plus" => Ok(constructions::pyr34_plus()),
        "shifts" => Ok(constructions::shifts()),
        "genshifts" => require(k, "k")
            .and_then(|k| constructions::genshifts(k).map_err(|e| e.to_string())),
        "gentiles1" => require(n, "n")
            .and_then(|n| constructions::gentiles1(n).map_err(|e| e.to_string())),
        "gentiles2" => require(m, "m").and_then(|m| {
            require(n, "n")
                .and_then(|n| constructions::gentiles2(m, n).map_err(|e| e.to_string()))
        }),
        "sept" => Ok(constructions::sept()),
        "genpyramid" => require(parties, "parties").and_then(|np| {
            constructions::genpyramid(np, *offset).map_err(|e| e.to_string())
        }),
        "quadres" => require(p, "p")
            .and_then(|p| constructions::quadres(p).map_err(|e| e.to_string())),
        "sept-counterexample" => Ok(constructions::sept_counterexample()),
        "tensor" => {
            let load = |opt: &Option<PathBuf>, flag: &str| {
                let path = opt
                    .as_ref()
                    .ok_or_else(|| format!("tensor requires --{flag}"))?;
                let doc = BasisDocument::load(path)?;
                doc.to_basis(tol)
            };
            load(left, "left").and_then(|a| {
                let b = load(right, "right")?;
                constructions::tensor_upb(&a, &b).map_err(|e| e.to_string())
            })
        }
        other => Err(format!("unknown construction name {other:?}")),
    };
    let pb = match built {
        Ok(pb) => pb,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let doc = BasisDocument::from_basis(&pb);
    if let Some(out) = out {
        if let Err(e) = doc.save(out) {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    } else {
        match serde_json::to_string_pretty(&doc) {
            Ok(text) => println!("{text}"),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
        }
    }
    println!("{}: {} states on dims {:?}", name, pb.len(), pb.dims());
    EXIT_OK
}

fn cmd_verify(path: &Path, budget: u64, exhaustive: bool, tol: Tolerance) -> i32 {
    let pb = match load_basis(path, tol) {
        Ok(pb) => pb,
        Err(code) => return code,
    };
    println!(
        "orthogonality: ok ({} states on dims {:?}, total dim {})",
        pb.len(),
        pb.dims(),
        pb.total_dim()
    );
    let bound = lower_bound_size(pb.dims());
    println!(
        "lower bound: n = {} vs sum(d_i - 1) + 1 = {}{}",
        pb.len(),
        bound,
        if pb.len() == bound { " (met with equality)" } else { "" }
    );
    let g = build_graph(&pb, tol);
    let per_color: Vec<usize> = (0..g.colors()).map(|c| g.edges(c).len()).collect();
    println!(
        "graph: {} vertices, edges per party {:?}, all pairs covered: {}",
        g.vertices(),
        per_color,
        g.covers_all_pairs()
    );
    let verdict = if exhaustive {
        let assignments = (pb.parties() as u128).pow(pb.len() as u32);
        println!("search: exhaustive, {assignments} assignments");
        is_extendible_unpruned(&pb, tol)
    } else {
        println!("search: pruned, budget {budget} nodes");
        is_extendible(&pb, tol, budget)
    };
    match verdict {
        ExtendVerdict::NoWitness => {
            println!("verdict: UPB (no product state extends the basis)");
            EXIT_OK
        }
        ExtendVerdict::Witness(w) => {
            println!(
                "verdict: extendible; witness partition {:?} with local ranks {:?}",
                w.partition.assign(),
                w.local_ranks
            );
            EXIT_OK
        }
        ExtendVerdict::BudgetExhausted => {
            println!("verdict: budget exhausted (inconclusive)");
            EXIT_INCONCLUSIVE
        }
    }
}

fn print_cuts(cuts: &[upb_core::entangle::CutReport]) {
    for c in cuts {
        println!(
            "  cut (transposed parties {:?}): min eigenvalue {:+.6e}",
            c.transposed, c.min_eigenvalue
        );
    }
}

fn cmd_certify(path: &Path, budget: u64, extend: Option<&[usize]>, tol: Tolerance) -> i32 {
    let pb = match load_basis(path, tol) {
        Ok(pb) => pb,
        Err(code) => return code,
    };
    let cert = match certify_with_extension(&pb, extend, tol, budget) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    println!("certificate: {}", cert.kind());
    match cert {
        Certificate::Upb { ppt } => {
            println!("the basis is a UPB; rho-bar is entangled and PPT on every cut (bound entangled)");
            print_cuts(&ppt.cuts);
            EXIT_OK
        }
        Certificate::RangeDeficit {
            span_dim,
            rank,
            ppt,
        } => {
            println!(
                "range criterion: product span {span_dim} < rank {rank}; rho-bar is entangled and PPT (bound entangled)"
            );
            print_cuts(&ppt.cuts);
            EXIT_OK
        }
        Certificate::SeparableByCompletion { completion } => {
            println!(
                "completable to {} states on dims {:?}; rho-bar is separable",
                completion.len(),
                completion.dims()
            );
            EXIT_OK
        }
        Certificate::PptAllCuts { ppt, rank } => {
            println!(
                "rho-bar is PPT on every cut with rank {rank} <= 2, hence separable (rank-two fact)"
            );
            print_cuts(&ppt.cuts);
            EXIT_OK
        }
        Certificate::Inconclusive { reason } => {
            println!("inconclusive: {reason}");
            EXIT_INCONCLUSIVE
        }
    }
}

/// Fixed palette indexed by party; cycles past eight parties.
const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
];

fn cmd_graph(path: &Path, dot_out: Option<&Path>, tol: Tolerance) -> i32 {
    let pb = match load_basis(path, tol) {
        Ok(pb) => pb,
        Err(code) => return code,
    };
    let g = build_graph(&pb, tol);
    let mut dot = String::from("graph orthogonality {\n  node [shape=circle];\n");
    for v in 0..g.vertices() {
        dot.push_str(&format!("  v{v};\n"));
    }
    // One edge line per (pair, color); doubly colored pairs get parallel edges.
    for c in 0..g.colors() {
        for &(a, b) in g.edges(c) {
            dot.push_str(&format!(
                "  v{a} -- v{b} [color=\"{}\", label=\"{c}\"];\n",
                PALETTE[c % PALETTE.len()]
            ));
        }
    }
    dot.push_str("}\n");
    if let Some(out) = dot_out {
        if let Err(e) = std::fs::write(out, &dot) {
            eprintln!("error: writing {}: {e}", out.display());
            return EXIT_INPUT;
        }
        let total: usize = (0..g.colors()).map(|c| g.edges(c).len()).sum();
        println!(
            "wrote {} vertices and {} edges across {} colors to {}",
            g.vertices(),
            total,
            g.colors(),
            out.display()
        );
    } else {
        print!("{dot}");
    }
    EXIT_OK
}
