//! `ofs`: build, generalise and analyse object-based finite-state models.

mod manifest;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ofs_core::analysis::{class_stats, count_report, enumerate, intersection_table};
use ofs_core::corpus::{ingest_text, tokenize, Alphabet, IngestOptions, Ingested, TokenizeMode};
use ofs_core::generalise::{dendrogram, generalise, similarity_matrix, sweep_tsv};
use ofs_core::instantiate::{instantiate, parse_prototype};
use ofs_core::numeric::{format_exact, parse_grid, parse_tau};
use ofs_core::ofs::{compile, parse_model, write_model, OfsModel};
use ofs_core::token::{display_tokens, Token};

use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(name = "ofs", version, about = "Object-based finite-state phonotactic models")]
struct Cli {
    /// Alphabet file (`token: CLASS, ...` per line).
    #[arg(long, global = true)]
    alphabet: Option<PathBuf>,

    /// Decimal places for displayed values, e.g. `sim:2`.
    #[arg(long, global = true, value_name = "WHAT:PLACES")]
    round: Option<String>,

    /// Reject words without exactly one stress marker (default).
    #[arg(long, global = true, overrides_with = "no_require_stress")]
    require_stress: bool,

    /// Admit unmarked words as unstressed.
    #[arg(long, global = true)]
    no_require_stress: bool,

    /// Split input on whitespace instead of longest match.
    #[arg(long, global = true)]
    whitespace: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write a JSON run manifest here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tokenize and filter a word list.
    Ingest {
        corpus: PathBuf,
        /// Normalized corpus (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Reject log as TSV (default: stderr).
        #[arg(long)]
        rejects: Option<PathBuf>,
    },
    /// Fill a prototype's level-0 sets from a word list.
    Instantiate {
        prototype: PathBuf,
        corpus: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Class sizes, unique counts and pairwise similarities.
    Stats { model: PathBuf },
    /// Merge level-0 sets with similarity at least tau.
    Generalise {
        model: PathBuf,
        /// Decimal or fraction in (0, 1].
        #[arg(long)]
        tau: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Merge tree of the level-0 sets, with partitions along a tau grid.
    Clustertree {
        model: PathBuf,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long, default_value = "0.1:1:0.1")]
        grid: String,
    },
    /// Derivations (and optionally distinct words) with k slots.
    Count {
        model: PathBuf,
        /// `2`, `1..4` or `1,2,3`.
        #[arg(long, short, default_value = "2")]
        k: String,
        #[arg(long)]
        distinct: bool,
    },
    /// Membership test with a derivation for each accepted word.
    Check {
        model: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Every derivation with at most max-k slots.
    Enumerate {
        model: PathBuf,
        #[arg(long)]
        max_k: usize,
        /// Stop after this many lines.
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<ofs_core::Error> for Failure {
    fn from(e: ofs_core::Error) -> Self {
        match e {
            ofs_core::Error::Internal(_) => Failure::Internal(e.to_string()),
            ofs_core::Error::InvalidThreshold(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

struct Run {
    cli: Cli,
    manifest: RunManifest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let name = match &cli.command {
        Command::Ingest { .. } => "ingest",
        Command::Instantiate { .. } => "instantiate",
        Command::Stats { .. } => "stats",
        Command::Generalise { .. } => "generalise",
        Command::Clustertree { .. } => "clustertree",
        Command::Count { .. } => "count",
        Command::Check { .. } => "check",
        Command::Enumerate { .. } => "enumerate",
    };
    let mut run = Run {
        manifest: RunManifest::new(name),
        cli,
    };
    match run.execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ofs {name}: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_bytes(path: &Path) -> Outcome<Vec<u8>> {
    std::fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `a`, `a..b` (inclusive) or `a,b,c`.
fn parse_ks(text: &str) -> Outcome<Vec<usize>> {
    let bad = || Failure::Usage(format!("bad slot count `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}

impl Run {
    fn input(&mut self, path: &Path) -> Outcome<String> {
        let bytes = read_bytes(path)?;
        self.manifest.input(path, &bytes);
        String::from_utf8(bytes).map_err(|_| Failure::Data(format!("{}: not UTF-8", path.display())))
    }

    fn model(&mut self, path: &Path) -> Outcome<OfsModel> {
        let text = self.input(path)?;
        parse_model(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
    }

    fn alphabet(&mut self) -> Outcome<Option<Alphabet>> {
        let Some(path) = self.cli.alphabet.clone() else {
            return Ok(None);
        };
        let text = self.input(&path)?;
        Alphabet::parse(&text)
            .map(Some)
            .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
    }

    fn require_alphabet(&mut self) -> Outcome<Alphabet> {
        self.alphabet()?
            .ok_or_else(|| Failure::Usage("--alphabet is required".to_string()))
    }

    fn mode(&self) -> TokenizeMode {
        if self.cli.whitespace {
            TokenizeMode::Whitespace
        } else {
            TokenizeMode::LongestMatch
        }
    }

    fn ingest_options(&mut self) -> IngestOptions {
        let require_stress = !self.cli.no_require_stress;
        self.manifest.param("require_stress", require_stress);
        self.manifest.param("whitespace", self.cli.whitespace);
        IngestOptions {
            require_stress,
            mode: self.mode(),
        }
    }

    fn places(&mut self, what: &str, default: u32) -> Outcome<u32> {
        let Some(spec) = self.cli.round.clone() else {
            return Ok(default);
        };
        let bad = || Failure::Usage(format!("bad --round `{spec}`, expected e.g. sim:2"));
        let (key, n) = spec.split_once(':').ok_or_else(bad)?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        if key.trim() != what {
            return Ok(default);
        }
        self.manifest.param("round", &spec);
        Ok(n)
    }

    fn corpus(&mut self, path: &Path, alphabet: &Alphabet) -> Outcome<Ingested> {
        let text = self.input(path)?;
        let opts = self.ingest_options();
        Ok(ingest_text(&text, alphabet, opts))
    }

    fn finish(&self) -> Outcome {
        if let Some(p) = &self.cli.manifest {
            write_file(p, &self.manifest.to_json())?;
        }
        Ok(())
    }

    fn execute(&mut self) -> Outcome {
        self.manifest.param("format", format!("{:?}", self.cli.format).to_lowercase());
        match &self.cli.command {
            Command::Ingest { corpus, out, rejects } => {
                let (corpus, out, rejects) = (corpus.clone(), out.clone(), rejects.clone());
                self.ingest(&corpus, out.as_deref(), rejects.as_deref())?
            }
            Command::Instantiate { prototype, corpus, out } => {
                let (p, c, o) = (prototype.clone(), corpus.clone(), out.clone());
                self.instantiate(&p, &c, o.as_deref())?
            }
            Command::Stats { model } => {
                let model = model.clone();
                self.stats(&model)?
            }
            Command::Generalise { model, tau, out } => {
                let (m, t, o) = (model.clone(), tau.clone(), out.clone());
                self.generalise(&m, &t, o.as_deref())?
            }
            Command::Clustertree { model, grid } => {
                let (m, g) = (model.clone(), grid.clone());
                self.clustertree(&m, &g)?
            }
            Command::Count { model, k, distinct } => {
                let (m, k, d) = (model.clone(), k.clone(), *distinct);
                self.count(&m, &k, d)?
            }
            Command::Check { model, words } => {
                let (m, w) = (model.clone(), words.clone());
                self.check(&m, &w)?
            }
            Command::Enumerate { model, max_k, limit } => {
                let (m, k, l) = (model.clone(), *max_k, *limit);
                self.enumerate(&m, k, l)?
            }
        }
        self.finish()
    }

    fn ingest(&mut self, corpus: &Path, out: Option<&Path>, rejects: Option<&Path>) -> Outcome {
        let alphabet = self.require_alphabet()?;
        let data = self.corpus(corpus, &alphabet)?;
        emit(out, &data.normalized())?;
        match rejects {
            Some(p) => write_file(p, &data.reject_log())?,
            None => {
                for r in &data.rejects {
                    eprintln!("line {}: {}", r.line, r.reason);
                }
            }
        }
        eprintln!("accepted {}, rejected {}", data.words.len(), data.rejects.len());
        Ok(())
    }

    fn instantiate(&mut self, prototype: &Path, corpus: &Path, out: Option<&Path>) -> Outcome {
        let text = self.input(prototype)?;
        let proto = parse_prototype(&text).map_err(|e| Failure::Data(format!("{}: {e}", prototype.display())))?;
        let alphabet = self.require_alphabet()?;
        let data = self.corpus(corpus, &alphabet)?;
        if !data.rejects.is_empty() {
            eprintln!("{} corpus lines rejected", data.rejects.len());
        }
        let model = instantiate(&proto, &data.data(), &alphabet.class_table())?;
        emit(out, &write_model(&model))?;
        let mut summary = String::new();
        for r in &model.base {
            summary.push_str(&format!("{}\t{}\n", r.name, r.rhs.len()));
        }
        if out.is_some() {
            print!("{summary}");
        } else {
            eprint!("{summary}");
        }
        Ok(())
    }

    fn stats(&mut self, path: &Path) -> Outcome {
        let model = self.model(path)?;
        if model.is_empty() {
            return Err(Failure::Data(format!("{}: model is empty", path.display())));
        }
        let places = self.places("sim", 4)?;
        let stats = class_stats(&model);
        let pairs = intersection_table(&model);
        match self.cli.format {
            Format::Tsv => print!("{}\n{}", stats.to_tsv(), pairs.to_tsv(places)),
            _ => print!("{}\n{}", stats.to_text(), pairs.to_text(places)),
        }
        Ok(())
    }

    fn generalise(&mut self, path: &Path, tau: &str, out: Option<&Path>) -> Outcome {
        let model = self.model(path)?;
        let tau = parse_tau(tau)?;
        self.manifest.param("tau", format_exact(&tau));
        let (g, records) = generalise(&model, tau)?;
        emit(out, &write_model(&g))?;
        for r in &records {
            eprintln!("level {}: {} <- {}", r.level, r.new_name, r.members.join(" "));
        }
        Ok(())
    }

    fn clustertree(&mut self, path: &Path, grid: &str) -> Outcome {
        let model = self.model(path)?;
        let grid = parse_grid(grid)?;
        let places = self.places("sim", 4)?;
        self.manifest.param(
            "grid",
            grid.iter().map(format_exact).collect::<Vec<_>>().join(","),
        );
        let matrix = similarity_matrix(&model)?;
        let tree = dendrogram(&matrix);
        match self.cli.format {
            Format::Dot => print!("{}", tree.to_dot(places)),
            Format::Tsv => print!("{}", sweep_tsv(&tree.sweep(&grid), places)),
            Format::Text => {
                print!("{}", tree.to_text(places));
                println!();
                print!("{}", sweep_tsv(&tree.sweep(&grid), places));
            }
        }
        Ok(())
    }

    fn count(&mut self, path: &Path, k: &str, distinct: bool) -> Outcome {
        let model = self.model(path)?;
        let ks = parse_ks(k)?;
        self.manifest.param("k", k);
        self.manifest.param("distinct", distinct);
        let report = count_report(&model, &ks, distinct)?;
        match self.cli.format {
            Format::Tsv => print!("{}", report.to_tsv()),
            _ => print!("{}", report.to_text()),
        }
        Ok(())
    }

    fn check(&mut self, path: &Path, words: &[String]) -> Outcome {
        let model = self.model(path)?;
        let alphabet = match self.alphabet()? {
            Some(a) => a,
            None => Alphabet::from_tokens(model.terminals.iter().cloned(), "TERMINALS"),
        };
        let automaton = compile(&model)?;
        let canonical = compile(&model.canonicalized())?;
        let mode = self.mode();
        for word in words {
            let tokens: Vec<Token> = tokenize(word, &alphabet, mode)?
                .into_iter()
                .filter(|t| !t.is_reserved())
                .collect();
            if automaton.accepts(&tokens)? {
                let d = canonical.parse(&tokens)?.ok_or_else(|| {
                    Failure::Internal(format!("`{word}` accepted without a derivation"))
                })?;
                println!("{word}\taccepted\t{d}");
            } else {
                println!("{word}\trejected\t{}", display_tokens(&tokens));
            }
        }
        Ok(())
    }

    fn enumerate(&mut self, path: &Path, max_k: usize, limit: Option<usize>) -> Outcome {
        let model = self.model(path)?;
        self.manifest.param("max_k", max_k);
        let items = enumerate(&model, max_k)?;
        let mut out = std::io::BufWriter::new(std::io::stdout().lock());
        for (word, d) in items.take(limit.unwrap_or(usize::MAX)) {
            if writeln!(out, "{}\t{d}", display_tokens(&word)).is_err() {
                // reader went away
                return Ok(());
            }
        }
        let _ = out.flush();
        Ok(())
    }
}
