use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Parser, Subcommand};
use log::{info, warn};
use serde_json::json;

use dirminor::butterfly::{butterfly_pipeline, has_butterfly_minor};
use dirminor::certificate::{verify, Certificate, CertificateDocument, CertificateInput};
use dirminor::coloring::dichromatic_number;
use dirminor::decomposition::certify_decomposition;
use dirminor::explore::{explore, ExploreConfig, MinorKind};
use dirminor::generate::{bidirected_complete, lower_bound_butterfly};
use dirminor::io::{digraph_to_dot, parse_digraph};
use dirminor::strong_minor::clique_minor_run;
use dirminor::subdivision::subdivision_pipeline;
use dirminor::{Digraph, VertexSet};

#[derive(Parser)]
#[command(name = "dirminor", version, about = "Dichromatic number and directed minors, with checkable certificates")]
struct Cli {
    /// Re-verify every emitted certificate before printing it.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    verify_all: bool,

    /// Also write a DOT rendering of the input (grouped by branch set or part) to this file.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact dichromatic number with an optimal colouring.
    Dichromatic { file: PathBuf },
    /// Partition into strongly connected 2-dicolourable parts with a coloured quotient graph.
    Decompose { file: PathBuf },
    /// Strong bidirected K_t model forced by the decomposition, if any.
    StrongMinor {
        file: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Butterfly contraction sequence down to bidirected K_t.
    Butterfly {
        file: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Subdivision of a subcubic pattern in a host digraph.
    Subdivide { host: PathBuf, pattern: PathBuf },
    /// Re-check a certificate against its embedded input.
    Verify { certificate: PathBuf },
    /// Digraph with dichromatic number t and no butterfly bidirected K_t minor (checked for t = 3).
    LowerBound {
        #[arg(long)]
        t: usize,
    },
    /// Search for digraphs with dichromatic number above t lacking a bidirected K_t minor.
    Explore {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// All digraphs up to isomorphism instead of random samples.
        #[arg(long)]
        exhaustive: bool,
        /// Look for butterfly minors instead of strong minors.
        #[arg(long)]
        butterfly: bool,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

fn read_digraph(path: &Path) -> Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_digraph(&text).with_context(|| format!("{}", path.display()))
}

fn groups(n: usize, sets: &[VertexSet]) -> Vec<Option<usize>> {
    let mut g = vec![None; n];
    for (i, s) in sets.iter().enumerate() {
        for v in s {
            g[v] = Some(i);
        }
    }
    g
}

struct Run<'a> {
    cli: &'a Cli,
}

impl Run<'_> {
    fn dot(&self, d: &Digraph, sets: Option<&[VertexSet]>) -> Result<()> {
        if let Some(path) = &self.cli.dot {
            let g = sets.map(|s| groups(d.n(), s));
            fs::write(path, digraph_to_dot(d, g.as_deref()))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }

    fn emit(&self, doc: &CertificateDocument) -> Result<()> {
        if self.cli.verify_all {
            verify(doc).context("emitted certificate failed verification")?;
            info!("{} certificate verified", doc.certificate.kind());
        }
        println!("{}", doc.to_json());
        Ok(())
    }

    fn run(&self) -> Result<bool> {
        match &self.cli.command {
            Command::Dichromatic { file } => {
                let d = read_digraph(file)?;
                let (k, coloring) = dichromatic_number(&d)?;
                self.dot(&d, Some(&coloring.classes()))?;
                let cert = Certificate::Dicoloring { dichromatic_number: k, coloring };
                self.emit(&CertificateDocument::new(CertificateInput::digraph(&d), cert))?;
                Ok(true)
            }
            Command::Decompose { file } => {
                let d = read_digraph(file)?;
                let cert = certify_decomposition(&d)?;
                self.dot(&d, Some(&cert.model.branch_sets))?;
                self.emit(&CertificateDocument::new(CertificateInput::digraph(&d), Certificate::Decomposition(cert)))?;
                Ok(true)
            }
            Command::StrongMinor { file, t } => {
                let d = read_digraph(file)?;
                let run = clique_minor_run(&d, *t)?;
                match run.model {
                    Some(model) => {
                        self.dot(&d, Some(&model.branch_sets))?;
                        let cert = Certificate::StrongModel { t: *t, model };
                        self.emit(&CertificateDocument::new(CertificateInput::digraph(&d), cert))?;
                        Ok(true)
                    }
                    None => {
                        let k = run.decomposition.quotient_coloring.k;
                        println!("{}", json!({ "result": "not forced", "t": t, "quotient_chromatic_number": k }));
                        warn!("quotient graph has chromatic number {k} < {t}; not forced");
                        Ok(false)
                    }
                }
            }
            Command::Butterfly { file, t } => {
                let d = read_digraph(file)?;
                match butterfly_pipeline(&d, *t)? {
                    Some(trace) => {
                        self.dot(&d, Some(&trace.provenance))?;
                        let cert = Certificate::ButterflyTrace { t: *t, trace };
                        self.emit(&CertificateDocument::new(CertificateInput::digraph(&d), cert))?;
                        Ok(true)
                    }
                    None => {
                        println!("{}", json!({ "result": "not forced", "t": t }));
                        Ok(false)
                    }
                }
            }
            Command::Subdivide { host, pattern } => {
                let d = read_digraph(host)?;
                let f = read_digraph(pattern)?;
                match subdivision_pipeline(&d, &f)? {
                    Some(emb) => {
                        let sets: Vec<VertexSet> = emb.branch_vertex.iter().map(|&b| VertexSet::singleton(b)).collect();
                        self.dot(&d, Some(&sets))?;
                        let input = CertificateInput { digraph: d, pattern: Some(f) };
                        self.emit(&CertificateDocument::new(input, Certificate::Subdivision(emb)))?;
                        Ok(true)
                    }
                    None => {
                        println!("{}", json!({ "result": "no strong model of the pattern" }));
                        Ok(false)
                    }
                }
            }
            Command::Verify { certificate } => {
                let text = fs::read_to_string(certificate)
                    .with_context(|| format!("cannot read {}", certificate.display()))?;
                let doc = CertificateDocument::from_json(&text)?;
                self.dot(&doc.input.digraph, None)?;
                let outcome = verify(&doc);
                let kind = doc.certificate.kind();
                match &outcome {
                    Ok(()) => println!("{}", json!({ "verified": true, "kind": kind })),
                    Err(e) => println!("{}", json!({ "verified": false, "kind": kind, "reason": e.to_string() })),
                }
                Ok(outcome.is_ok())
            }
            Command::LowerBound { t } => {
                let d = lower_bound_butterfly(*t)?;
                self.dot(&d, None)?;
                let (k, coloring) = dichromatic_number(&d)?;
                let free = if *t == 3 {
                    Some(!has_butterfly_minor(&d, &bidirected_complete(3))?)
                } else {
                    None
                };
                let doc = CertificateDocument::new(
                    CertificateInput::digraph(&d),
                    Certificate::Dicoloring { dichromatic_number: k, coloring },
                );
                if self.cli.verify_all {
                    verify(&doc)?;
                }
                println!(
                    "{}",
                    json!({
                        "t": t,
                        "dichromatic_number": k,
                        "butterfly_clique_free": free,
                        "certificate": doc,
                    })
                );
                Ok(k == *t && free != Some(false))
            }
            Command::Explore { t, max_n, seed, exhaustive, butterfly, samples } => {
                let threads = match std::env::var("DIRMINOR_THREADS") {
                    Ok(v) => Some(v.parse().context("DIRMINOR_THREADS must be a positive integer")?),
                    Err(_) => None,
                };
                if threads == Some(0) {
                    bail!("DIRMINOR_THREADS must be a positive integer");
                }
                let config = ExploreConfig {
                    t: *t,
                    max_n: *max_n,
                    seed: *seed,
                    exhaustive: *exhaustive,
                    samples: *samples,
                    minor: if *butterfly { MinorKind::Butterfly } else { MinorKind::Strong },
                    threads,
                };
                let report = explore(&config)?;
                let verdict = if report.counterexamples.is_empty() {
                    "none found in range"
                } else {
                    "counterexample candidates found"
                };
                println!("{}", json!({ "result": verdict, "report": report }));
                Ok(true)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match (Run { cli: &cli }).run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
