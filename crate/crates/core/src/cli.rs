//! Command-line front end.
//!
//! Results go to stdout (or the `--out` file), diagnostics to stderr. Exit
//! code 1 means an input could not be loaded, 2 means the invocation itself
//! was wrong.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{merge, sequence_sentences, shuffle, RawDocument};
use crate::dataflow::Tdr29Mode;
use crate::depgraph::{
    parse_conllu, parse_native, to_native_string, DocFormat, LabelNormalizer, ParsedDocument,
};
use crate::emit::{bp_diagram, er_diagram, ModelDocument};
use crate::er::EachMode;
use crate::error::{Error, Result};
use crate::eval::{evaluate, GoldAnnotation};
use crate::lexicon::{Lexicon, LEXICON_ENV};
use crate::pipeline::{run, PipelineConfig};

#[derive(Debug, Parser)]
#[command(
    name = "remod",
    version,
    about = "Extract ER and BP models from parsed requirements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the extraction pipeline over a dependency file.
    Extract(ExtractArgs),
    /// Score a model file against a gold annotation.
    Eval(EvalArgs),
    /// Write a dependency file with its sentences in a seeded random order.
    Shuffle(ShuffleArgs),
    /// Concatenate dependency files into one document.
    Merge(MergeArgs),
    /// Print the sentences of a use-case text in execution order.
    Sequence(SequenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    General,
    Ucs,
    Stories,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EachArg {
    N,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tdr29Arg {
    Prose,
    Pseudocode,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Dependency file, native or CoNLL-U.
    #[arg(long)]
    pub deps: Option<PathBuf>,
    /// Raw requirements text, shown next to diagnostics.
    #[arg(long)]
    pub text: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: FormatArg,
    /// Model file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub er_dot: Option<PathBuf>,
    #[arg(long)]
    pub bp_dot: Option<PathBuf>,
    /// Lexicon overlay; falls back to the REMOD_LEXICON variable.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Cardinality read from the determiner "each".
    #[arg(long, value_enum, default_value = "one")]
    pub each_mode: EachArg,
    /// How a subject "system" reads an ambiguous verb.
    #[arg(long, value_enum, default_value = "prose")]
    pub tdr29_mode: Tdr29Arg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ShuffleArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// Plain-text use case or requirements document.
    pub input: PathBuf,
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Extract(a) => extract(a),
        Command::Eval(a) => eval(a),
        Command::Shuffle(a) => {
            let doc = load_deps(&a.input)?;
            write_or_print(a.out.as_deref(), &to_native_string(&shuffle(&doc, a.seed)))?;
            Ok(0)
        }
        Command::Merge(a) => {
            let docs = a
                .inputs
                .iter()
                .map(|p| load_deps(p))
                .collect::<Result<Vec<_>>>()?;
            write_or_print(a.out.as_deref(), &to_native_string(&merge(&docs)?))?;
            Ok(0)
        }
        Command::Sequence(a) => {
            let raw = RawDocument::load(&a.input)?;
            let seq = sequence_sentences(&raw);
            let mut out = String::new();
            for s in &seq.sentences {
                out.push_str(&format!(
                    "{}\t{}\t{}\n",
                    s.flow_tag.as_str(),
                    s.step_label.as_deref().unwrap_or("-"),
                    s.text
                ));
            }
            for w in &seq.warnings {
                eprintln!("warning: {w}");
            }
            write_or_print(None, &out)?;
            Ok(0)
        }
    }
}

/// Reads a dependency file, choosing the reader from its first line.
pub fn load_deps(path: &Path) -> Result<ParsedDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let normalizer = LabelNormalizer::default();
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("#doc") {
        parse_native(&text, &normalizer)
    } else {
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("conllu");
        parse_conllu(&text, id, &normalizer)
    }
}

fn lexicon_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        std::env::var_os(LEXICON_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

fn extract(a: ExtractArgs) -> Result<i32> {
    let Some(deps) = a.deps else {
        eprintln!(
            "error: extract needs a dependency file (--deps PATH).\n\
             Parse raw text first with the parser adapter, for example\n  \
             remod-parse --in requirements.txt --out requirements.deps\n\
             and pass the result to `remod extract --deps requirements.deps`."
        );
        return Ok(2);
    };
    let lex = Lexicon::load(lexicon_path(a.lexicon).as_deref())?;
    let doc = load_deps(&deps)?;
    let raw_sentences = match &a.text {
        Some(p) => sequence_sentences(&RawDocument::load(p)?)
            .sentences
            .into_iter()
            .map(|s| s.text)
            .collect(),
        None => Vec::new(),
    };
    let config = PipelineConfig {
        each_mode: match a.each_mode {
            EachArg::N => EachMode::N,
            EachArg::One => EachMode::One,
        },
        tdr29_mode: match a.tdr29_mode {
            Tdr29Arg::Prose => Tdr29Mode::Prose,
            Tdr29Arg::Pseudocode => Tdr29Mode::Pseudocode,
        },
        format: match a.format {
            FormatArg::Auto => None,
            FormatArg::General => Some(DocFormat::General),
            FormatArg::Ucs => Some(DocFormat::Ucs),
            FormatArg::Stories => Some(DocFormat::Stories),
        },
    };
    let output = run(&doc, &lex, config);
    let model = output.model_document();
    for d in &model.diagnostics {
        match d.seq {
            Some(seq) => {
                let shown = raw_sentences
                    .get(seq.wrapping_sub(1))
                    .cloned()
                    .or_else(|| output.doc.sentence(seq).map(|s| s.text.clone()))
                    .unwrap_or_default();
                eprintln!("sentence {seq}: {} [{shown}]", d.message);
            }
            None => eprintln!("{}", d.message),
        }
    }
    write_or_print(a.out.as_deref(), &model.to_json())?;
    if let Some(p) = &a.er_dot {
        write_file(p, &er_diagram(&model.er_model()))?;
    }
    if let Some(p) = &a.bp_dot {
        write_file(p, &bp_diagram(&model.bp_model()))?;
    }
    Ok(0)
}

fn eval(a: EvalArgs) -> Result<i32> {
    let model = ModelDocument::load(&a.model)?;
    let gold = GoldAnnotation::load(&a.gold)?;
    let report = evaluate(&model, &gold);
    let text = if a.json {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        s
    } else {
        report.to_table()
    };
    write_or_print(None, &text)?;
    Ok(0)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flag_is_a_usage_error() {
        assert_eq!(main_with(["remod", "extract", "--bogus"]), 2);
    }

    #[test]
    fn missing_subcommand_is_a_usage_error() {
        assert_eq!(main_with(["remod"]), 2);
    }

    #[test]
    fn missing_gold_is_a_load_error() {
        let dir = tempfile::tempdir().unwrap();
        let model = dir.path().join("m.json");
        write_file(
            &model,
            &ModelDocument::new("x", &Default::default(), None, &[], &[]).to_json(),
        )
        .unwrap();
        let code = main_with([
            OsString::from("remod"),
            "eval".into(),
            "--model".into(),
            model.into_os_string(),
            "--gold".into(),
            dir.path().join("absent.json").into_os_string(),
        ]);
        assert_eq!(code, 1);
    }
}
