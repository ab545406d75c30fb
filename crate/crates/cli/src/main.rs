use std::collections::HashSet;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use icorule::consent::{lower_to_facts, ConsentForm};
use icorule::kb::FactBase;
use icorule::lang::{format_facts, parse_atom, parse_axioms, parse_facts, parse_rules, LangError};
use icorule::packs::{self, check_loaded, load_pack, PackError, USE_CASES};
use icorule::reasoner::export::{closure_text, to_json};
use icorule::reasoner::{explain, Binding};
use icorule::term::sort_canonical;
use icorule::vocab::Vocabulary;
use icorule::{run_fixpoint, Atom, Closure, Fact, InverseAxiom, Limits, PrefixTable, Rule};

/// Forward-chaining SWRL reasoning over consent-form facts.
#[derive(Parser)]
#[command(name = "icorule", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run rules and axioms to a fixpoint and write the closure.
    Reason(ReasonArgs),
    /// Compare a pack's derived facts with its expected file.
    Check(CheckArgs),
    /// Print the justification tree of a fact in the closure.
    Explain(ExplainArgs),
    /// Convert a consent-form document to facts.
    Lower(LowerArgs),
    /// Syntax-check rule, fact, axiom or form files.
    Parse(ParseArgs),
    /// Print the facts of a closure file that match a pattern.
    Query(QueryArgs),
}

#[derive(Args)]
struct Inputs {
    /// Fact files (.swf).
    #[arg(long, num_args = 1..)]
    facts: Vec<PathBuf>,
    /// Rule files (.swrl).
    #[arg(long, num_args = 1..)]
    rules: Vec<PathBuf>,
    /// Inverse-axiom files (.ax).
    #[arg(long, num_args = 1..)]
    axioms: Vec<PathBuf>,
    /// Take facts, rule and axioms from this pack.
    #[arg(long)]
    pack: Option<String>,
    /// Directory holding the packs.
    #[arg(long, env = packs::PACK_DIR_ENV)]
    pack_dir: Option<PathBuf>,
    /// Fail once this many iterations run without reaching a fixpoint.
    #[arg(long, default_value_t = Limits::default().max_iterations)]
    max_iterations: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct ReasonArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write only the derived facts.
    #[arg(long)]
    derived_only: bool,
    /// Append catalog labels to each fact line.
    #[arg(long)]
    annotate: bool,
    /// Label catalog replacing the shipped one.
    #[arg(long)]
    vocab: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Pack id.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    pack: Option<String>,
    /// Check uc1 to uc4.
    #[arg(long)]
    all: bool,
    /// Directory holding the packs.
    #[arg(long, env = packs::PACK_DIR_ENV)]
    pack_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Ground atom to explain.
    #[arg(long)]
    fact: String,
}

#[derive(Args)]
struct LowerArgs {
    /// Consent-form document (.toml).
    form: PathBuf,
    /// Output fact file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    /// Files to check, by extension: .swrl, .swf, .ax or .toml.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    /// Fact file, usually written by `reason`.
    closure: PathBuf,
    /// Class or property atom, variables allowed.
    pattern: String,
}

/// A failure and its exit code.
enum Failure {
    /// Exit 1; the report is already printed.
    Mismatch,
    /// Exit 2.
    Input(String),
    /// Exit 3.
    Runtime(String),
}

impl Failure {
    fn input(context: impl Display, e: impl Display) -> Self {
        Failure::Input(format!("{context}: {e}"))
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reason(a) => reason(a),
        Command::Check(a) => check(a),
        Command::Explain(a) => explain_fact(a),
        Command::Lower(a) => lower(a),
        Command::Parse(a) => parse(a),
        Command::Query(a) => query(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(path.display(), e))
}

fn lang_error(path: &Path, e: LangError) -> Failure {
    match e {
        LangError::Syntax { .. } | LangError::Located { .. } => Failure::Input(format!("{}:{e}", path.display())),
        e => Failure::input(path.display(), e),
    }
}

fn pack_error(e: PackError) -> Failure {
    match e {
        PackError::Reason { .. } => Failure::Runtime(e.to_string()),
        e => Failure::Input(e.to_string()),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(format!("standard output: {e}"))),
    }
}

struct Loaded {
    facts: Vec<Fact>,
    rules: Vec<Rule>,
    axioms: Vec<InverseAxiom>,
    paths: Vec<PathBuf>,
}

fn load_inputs(inputs: &Inputs) -> Result<Loaded> {
    let mut loaded = Loaded {
        facts: Vec::new(),
        rules: Vec::new(),
        axioms: Vec::new(),
        paths: Vec::new(),
    };
    if let Some(id) = &inputs.pack {
        let dir = inputs.pack_dir.clone().unwrap_or_else(packs::default_pack_dir);
        let pack = load_pack(&dir, id).map_err(pack_error)?;
        loaded.facts = pack.facts;
        loaded.rules = pack.rules;
        loaded.axioms = pack.axioms;
        for f in [packs::FACTS_FILE, packs::RULES_FILE, packs::AXIOMS_FILE] {
            loaded.paths.push(pack.dir.join(f));
        }
    }
    let prefixes = PrefixTable::default();
    for path in &inputs.facts {
        let facts = parse_facts(&read(path)?, &prefixes).map_err(|e| lang_error(path, e))?;
        loaded.facts.extend(facts);
        loaded.paths.push(path.clone());
    }
    let mut ids: HashSet<String> = loaded.rules.iter().map(|r| r.id().to_string()).collect();
    for path in &inputs.rules {
        for rule in parse_rules(&read(path)?, &prefixes).map_err(|e| lang_error(path, e))? {
            if !ids.insert(rule.id().to_string()) {
                return Err(lang_error(path, LangError::DuplicateRuleId(rule.id().to_string())));
            }
            loaded.rules.push(rule);
        }
        loaded.paths.push(path.clone());
    }
    for path in &inputs.axioms {
        let axioms = parse_axioms(&read(path)?, &prefixes).map_err(|e| lang_error(path, e))?;
        loaded.axioms.extend(axioms);
        loaded.paths.push(path.clone());
    }
    if loaded.facts.is_empty() && inputs.facts.is_empty() && inputs.pack.is_none() {
        return Err(Failure::Input("no fact source given (use --facts or --pack)".into()));
    }
    if loaded.rules.is_empty() && inputs.rules.is_empty() && inputs.pack.is_none() {
        return Err(Failure::Input("no rule source given (use --rules or --pack)".into()));
    }
    Ok(loaded)
}

fn fixpoint(loaded: &Loaded, inputs: &Inputs) -> Result<Closure> {
    let limits = Limits {
        max_iterations: inputs.max_iterations,
    };
    let closure = run_fixpoint(FactBase::from_facts(loaded.facts.iter().cloned()), &loaded.rules, &loaded.axioms, &limits)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    for note in closure.lints() {
        eprintln!("{note}");
    }
    Ok(closure)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

fn reason(args: ReasonArgs) -> Result<()> {
    if args.annotate && args.format == Format::Structured {
        return Err(Failure::Input("--annotate applies to text output only".into()));
    }
    let loaded = load_inputs(&args.inputs)?;
    if let Some(out) = &args.out {
        if let Some(p) = loaded.paths.iter().find(|p| same_file(p, out)) {
            return Err(Failure::Input(format!("output path {} is also an input", p.display())));
        }
    }
    let vocab = match &args.vocab {
        Some(path) => Some(Vocabulary::load(path, &PrefixTable::default()).map_err(|e| Failure::input(path.display(), e))?),
        None => None,
    };
    let closure = fixpoint(&loaded, &args.inputs)?;
    let full = !args.derived_only;
    let text = match args.format {
        Format::Structured => to_json(&closure, full),
        Format::Text => {
            let text = closure_text(&closure, full);
            if args.annotate {
                let vocab = vocab.unwrap_or_else(Vocabulary::builtin);
                vocab
                    .annotate(&text, &PrefixTable::default())
                    .map_err(|e| Failure::Runtime(e.to_string()))?
            } else {
                text
            }
        }
    };
    write_output(args.out.as_deref(), &text)
}

fn check(args: CheckArgs) -> Result<()> {
    let dir = args.pack_dir.unwrap_or_else(packs::default_pack_dir);
    let ids: Vec<String> = match args.pack {
        Some(id) => vec![id],
        None => USE_CASES.iter().map(|s| s.to_string()).collect(),
    };
    let mut failed = false;
    let mut out = String::new();
    for id in &ids {
        let pack = load_pack(&dir, id).map_err(pack_error)?;
        let report = check_loaded(&pack, &Limits::default()).map_err(pack_error)?;
        for note in report.closure.lints() {
            eprintln!("{id}: {note}");
        }
        out.push_str(&format!("{report}\n"));
        if !report.passed() {
            failed = true;
            out.push_str(&report.diff_text());
        }
    }
    write_output(None, &out)?;
    if failed {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn ground(atom: &Atom) -> Option<Fact> {
    atom.instantiate(&Binding::new())
}

fn explain_fact(args: ExplainArgs) -> Result<()> {
    let prefixes = PrefixTable::default();
    let atom = parse_atom(&args.fact, &prefixes).map_err(|e| Failure::input("--fact", e))?;
    let fact = ground(&atom).ok_or_else(|| Failure::input("--fact", format!("`{atom}` is not a ground class or property atom")))?;
    let loaded = load_inputs(&args.inputs)?;
    let closure = fixpoint(&loaded, &args.inputs)?;
    let tree = explain(&closure, &fact).map_err(|e| Failure::Runtime(e.to_string()))?;
    let mut text = tree.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_output(None, &text)
}

fn lower(args: LowerArgs) -> Result<()> {
    if args.out.as_deref().is_some_and(|o| same_file(o, &args.form)) {
        return Err(Failure::Input("output path is the form itself".into()));
    }
    let form = ConsentForm::from_toml(&read(&args.form)?).map_err(|e| Failure::input(args.form.display(), e))?;
    let facts = lower_to_facts(&form).map_err(|e| Failure::input(args.form.display(), e))?;
    write_output(args.out.as_deref(), &format_facts(&facts))
}

fn parse(args: ParseArgs) -> Result<()> {
    let prefixes = PrefixTable::default();
    for path in &args.files {
        let text = read(path)?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let summary = match ext {
            "swrl" => {
                let rules = parse_rules(&text, &prefixes).map_err(|e| lang_error(path, e))?;
                format!("{} rule(s)", rules.len())
            }
            "swf" => {
                let facts = parse_facts(&text, &prefixes).map_err(|e| lang_error(path, e))?;
                format!("{} fact(s)", facts.len())
            }
            "ax" => {
                let axioms = parse_axioms(&text, &prefixes).map_err(|e| lang_error(path, e))?;
                format!("{} axiom(s)", axioms.len())
            }
            "toml" => {
                let form = ConsentForm::from_toml(&text).map_err(|e| Failure::input(path.display(), e))?;
                let violations = icorule::consent::validate(&form);
                if !violations.is_empty() {
                    let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
                    return Err(Failure::input(path.display(), format!("invalid consent form:\n{}", lines.join("\n"))));
                }
                format!("{} permission(s)", form.permissions.len())
            }
            _ => {
                return Err(Failure::input(
                    path.display(),
                    "unknown file type (expected .swrl, .swf, .ax or .toml)",
                ))
            }
        };
        eprintln!("{}: ok, {summary}", path.display());
    }
    Ok(())
}

fn query(args: QueryArgs) -> Result<()> {
    let prefixes = PrefixTable::default();
    let facts = parse_facts(&read(&args.closure)?, &prefixes).map_err(|e| lang_error(&args.closure, e))?;
    let pattern = parse_atom(&args.pattern, &prefixes).map_err(|e| Failure::input("pattern", e))?;
    if pattern.is_builtin() {
        return Err(Failure::input("pattern", "built-in atoms cannot be queried"));
    }
    let fb = FactBase::from_facts(facts);
    let empty = Binding::new();
    let mut hits: Vec<Fact> = fb
        .match_pattern(&pattern, &empty)
        .filter_map(|b| pattern.instantiate(&b))
        .collect();
    sort_canonical(&mut hits);
    hits.dedup();
    write_output(None, &format_facts(&hits))
}
