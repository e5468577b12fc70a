use std::io::Write;
use std::path::{Path, PathBuf};

use cartograph_core::fixture::{journal1_spec, journal2_spec, reconstruct_fixture};
use cartograph_core::implications::shared_intents;
use cartograph_core::scaling::marginals;
use cartograph_core::{
    apply_scale, cross_support, parse_annotations, Analysis, AnnotationCorpus, Convention,
    FormalContext, Level,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  invalid command line
  3  file could not be read or written
  4  input file could not be parsed
  5  analysis failed (invalid conventions, unknown labels, infeasible fixture)
  6  service could not start (e.g. port in use)";

#[derive(Debug, Parser)]
#[command(name = "cartograph", version, about = "Conceptual controversy maps from convention-annotated articles", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merge annotation files and report what they contain.
    Ingest(Pipeline),
    /// Print the scaled cross table and its attribute marginals.
    Scale(Pipeline),
    /// Print context size, density, concept count and order metrics.
    Analyze(Pipeline),
    /// Print the canonical implication base.
    Base(Pipeline),
    /// Print the greedy ordinal factorization.
    Factors(Pipeline),
    /// Compare two annotation files at the same level.
    Compare(Compare),
    /// Write the scaled context in Burmeister CXT format.
    ExportCxt(Pipeline),
    /// Write the laid-out map document (JSON).
    Map(Pipeline),
    /// Serve map documents and navigation queries over HTTP.
    Serve(Serve),
    /// Regenerate the bundled fixture corpora.
    Fixtures(Fixtures),
}

#[derive(Debug, Args, Clone)]
pub struct Pipeline {
    /// Annotation CSV files; relative paths not found are looked up in the data directory.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Keep only articles from this journal.
    #[arg(long)]
    pub journal: Option<String>,
    /// Conventions to scale, in order.
    #[arg(long, value_delimiter = ',', default_value = "m,g,s,i", value_parser = parse_convention)]
    pub conventions: Vec<Convention>,
    /// Scale level (1, 2 or 3).
    #[arg(long, default_value = "1", value_parser = parse_level)]
    pub level: Level,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit at most this many factors.
    #[arg(long)]
    pub max_factors: Option<usize>,
    /// Default directory for relative input paths.
    #[arg(long, env = "CARTOGRAPH_DATA")]
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareWhat {
    Intents,
    Base,
    Support,
    All,
}

#[derive(Debug, Args)]
pub struct Compare {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "m,g,s,i", value_parser = parse_convention)]
    pub conventions: Vec<Convention>,
    #[arg(long, default_value = "1", value_parser = parse_level)]
    pub level: Level,
    #[arg(long, value_enum, default_value = "all")]
    pub what: CompareWhat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "CARTOGRAPH_DATA")]
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Serve {
    #[command(flatten)]
    pub pipeline: Pipeline,
    #[arg(long, default_value = "8080", value_parser = clap::value_parser!(u16).range(1..))]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Directory of static UI assets served under `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Fixtures {
    /// Directory receiving j1.csv and j2.csv.
    #[arg(long, default_value = "fixtures")]
    pub out: PathBuf,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: cartograph_core::Error| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse()
        .map_err(|_| format!("level must be 1, 2 or 3, got `{s}`"))
}

fn resolve(path: &Path, data_dir: Option<&Path>) -> PathBuf {
    match data_dir {
        Some(dir) if path.is_relative() && !path.exists() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_corpus(
    inputs: &[PathBuf],
    journal: Option<&str>,
    data_dir: Option<&Path>,
) -> CliResult<AnnotationCorpus> {
    let mut merged: Option<AnnotationCorpus> = None;
    for input in inputs {
        let path = resolve(input, data_dir);
        let corpus = parse_annotations(&read(&path)?).map_err(|source| CliError::Input {
            path: path.clone(),
            source,
        })?;
        merged = Some(match merged {
            Some(m) => m.merge(&corpus),
            None => corpus,
        });
    }
    let corpus = merged.ok_or_else(|| CliError::Usage("no input files".into()))?;
    match journal {
        Some(j) => {
            let filtered = corpus.filter_journal(j);
            if filtered.is_empty() {
                return Err(CliError::Usage(format!("no articles from journal `{j}`")));
            }
            Ok(filtered)
        }
        None => Ok(corpus),
    }
}

impl Pipeline {
    pub fn corpus(&self) -> CliResult<AnnotationCorpus> {
        load_corpus(&self.inputs, self.journal.as_deref(), self.data_dir.as_deref())
    }

    pub fn context(&self) -> CliResult<FormalContext> {
        Ok(apply_scale(&self.corpus()?, &self.conventions, self.level)?)
    }

    pub fn analysis(&self) -> CliResult<Analysis> {
        Ok(Analysis::new(&self.corpus()?, &self.conventions, self.level)?)
    }
}

/// Up to four decimals, trailing zeros dropped.
pub fn format_density(d: f64) -> String {
    let s = format!("{d:.4}");
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s).to_string()
}

fn emit(out_path: Option<&Path>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match out_path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn cross_table(ctx: &FormalContext) -> String {
    let mut s = String::from("article");
    for a in ctx.attributes() {
        s.push('\t');
        s.push_str(a);
    }
    s.push('\n');
    for (g, obj) in ctx.objects().iter().enumerate() {
        s.push_str(obj);
        for m in 0..ctx.attribute_count() {
            s.push('\t');
            s.push(if ctx.incident(g, m) { 'X' } else { '.' });
        }
        s.push('\n');
    }
    s
}

fn intent_line(labels: &[String]) -> String {
    if labels.is_empty() {
        "{}".into()
    } else {
        format!("{{{}}}", labels.join(", "))
    }
}

/// Runs every subcommand except `serve`, writing results to `stdout` or `--out`.
pub fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Ingest(p) => {
            let corpus = p.corpus()?;
            let annotations: usize = corpus
                .annotations()
                .iter()
                .map(|a| a.markers.iter().count())
                .sum();
            if let Some(out) = &p.out {
                emit(Some(out), stdout, &corpus.to_csv())?;
            }
            let summary = format!(
                "articles: {}\njournals: {}\nmarkers: {}\n",
                corpus.len(),
                corpus.journals().join(", "),
                annotations
            );
            emit(None, stdout, &summary)
        }
        Command::Scale(p) => {
            let ctx = p.context()?;
            let m = marginals(&ctx);
            let mut text = cross_table(&ctx);
            text.push('\n');
            for (label, n) in &m.counts {
                text.push_str(&format!("{label}: {n}\n"));
            }
            text.push_str(&format!("total: {}\n", m.total));
            emit(p.out.as_deref(), stdout, &text)
        }
        Command::Analyze(p) => {
            let a = p.analysis()?;
            let m = &a.metrics;
            let text = format!(
                "context: {}\n|G|={}\n|M|={}\n|I|={}\ndensity {}\nconcepts {}\nwidth {}\ndepth {}\ndimension {}\n",
                a.context().name(),
                m.objects,
                m.attributes,
                m.incidence,
                format_density(m.density),
                m.concepts,
                m.width,
                m.depth,
                m.dimension
            );
            emit(p.out.as_deref(), stdout, &text)
        }
        Command::Base(p) => {
            let base = cartograph_core::canonical_base(&p.context()?);
            emit(p.out.as_deref(), stdout, &base.to_string())
        }
        Command::Factors(p) => {
            let a = p.analysis()?;
            let text = a.factorization.report(a.context(), p.max_factors);
            emit(p.out.as_deref(), stdout, &text)
        }
        Command::Compare(c) => {
            let dir = c.data_dir.as_deref();
            let first = load_corpus(std::slice::from_ref(&c.first), None, dir)?;
            let second = load_corpus(std::slice::from_ref(&c.second), None, dir)?;
            let a = Analysis::new(&first, &c.conventions, c.level)?;
            let b = Analysis::new(&second, &c.conventions, c.level)?;
            let mut text = String::new();
            let all = c.what == CompareWhat::All;
            if all || c.what == CompareWhat::Intents {
                let shared = shared_intents(a.context(), b.context())?;
                text.push_str(&format!("shared intents: {}\n", shared.len()));
                for i in &shared {
                    text.push_str(&format!("  {}\n", intent_line(&a.context().attribute_labels(i))));
                }
            }
            if all || c.what == CompareWhat::Base {
                text.push_str(&format!("base {}:\n{}", a.journal, a.base()));
                text.push_str(&format!("base {}:\n{}", b.journal, b.base()));
            }
            if all || c.what == CompareWhat::Support {
                for (x, y) in [(&a, &b), (&b, &a)] {
                    if let Some(f) = x.factorization.factors.first() {
                        let s = cross_support(&f.sequence, y.context())?;
                        text.push_str(&format!(
                            "F1 of {} in {}: {} ({})\n",
                            x.journal, y.journal, s, f.sequence
                        ));
                    }
                }
            }
            emit(c.out.as_deref(), stdout, &text)
        }
        Command::ExportCxt(p) => emit(p.out.as_deref(), stdout, &p.context()?.to_cxt()),
        Command::Map(p) => {
            let doc = p.analysis()?.map(p.max_factors);
            emit(p.out.as_deref(), stdout, &doc.to_json()?)
        }
        Command::Fixtures(f) => {
            std::fs::create_dir_all(&f.out).map_err(|source| CliError::Io {
                path: f.out.clone(),
                source,
            })?;
            for (name, spec) in [("j1.csv", journal1_spec()), ("j2.csv", journal2_spec())] {
                let corpus = reconstruct_fixture(&spec)?;
                let path = f.out.join(name);
                emit(Some(&path), stdout, &corpus.to_csv())?;
                writeln!(stdout, "wrote {} ({} articles)", path.display(), corpus.len()).map_err(
                    |source| CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    },
                )?;
            }
            Ok(())
        }
        Command::Serve(_) => Err(CliError::Usage("serve must be run through `run`".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_formatting() {
        assert_eq!(format_density(0.75), "0.75");
        assert_eq!(format_density(80.0 / 144.0), "0.5556");
        assert_eq!(format_density(1.0), "1");
        assert_eq!(format_density(0.0), "0");
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "cartograph", "analyze", "x.csv", "--level", "2", "--conventions", "i,m",
        ])
        .unwrap();
        match cli.command {
            Command::Analyze(p) => {
                assert_eq!(p.level, Level::L2);
                assert_eq!(p.conventions, [Convention::Industry, Convention::Market]);
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["cartograph", "analyze", "x.csv", "--level", "4"]).is_err());
        assert!(Cli::try_parse_from(["cartograph", "serve", "x.csv", "--port", "0"]).is_err());
        assert!(Cli::try_parse_from(["cartograph", "analyze", "x.csv", "--conventions", "q"]).is_err());
    }

    #[test]
    fn data_dir_lookup() {
        let dir = Path::new("/data");
        assert_eq!(resolve(Path::new("nope.csv"), Some(dir)), dir.join("nope.csv"));
        assert_eq!(resolve(Path::new("/abs.csv"), Some(dir)), Path::new("/abs.csv"));
        assert_eq!(resolve(Path::new("nope.csv"), None), Path::new("nope.csv"));
    }
}
