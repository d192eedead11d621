//! The `jssec` command: argument handling, input discovery and exit codes.
//!
//! Exit codes: 0 clean, 1 findings at or above `--fail-level`, 2 usage
//! error, 3 config error, 4 internal error or rule crash.

mod discover;

use std::io::IsTerminal;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use jssec_core::config::{load_config, AnalyzerConfig, Profile};
use jssec_core::engine::{AnalysisInput, Engine, ExecutionMode};
use jssec_core::finding::Severity;
use jssec_core::mapping::{explain, rules_table, RuleId};
use jssec_core::report::{apply_baseline, render, Format, RenderOptions};

pub use discover::{discover_inputs, DiscoveredInput, InputError};

pub const EXIT_CLEAN: u8 = 0;
pub const EXIT_FINDINGS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ColorChoice {
    Auto,
    Always,
    Never,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Sarif,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileArg {
    All,
    Client,
    Server,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Info,
    Warning,
    Error,
}

/// Static analyzer for security smells in JavaScript and HTML.
#[derive(Debug, Parser)]
#[command(name = "jssec", version)]
pub struct CliOptions {
    /// Files, directories or globs to analyze; `-` reads JavaScript from stdin.
    inputs: Vec<String>,
    /// Report format.
    #[arg(short, long, value_enum, default_value = "text")]
    format: FormatArg,
    /// JSON config file (falls back to $JSSEC_CONFIG).
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Limit rules to client-side or server-side code.
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    /// Lowest severity that makes the exit code nonzero.
    #[arg(long, value_enum, default_value = "warning")]
    fail_level: LevelArg,
    /// Print the rule table and exit.
    #[arg(long)]
    list_rules: bool,
    /// Describe one rule and exit.
    #[arg(long, value_name = "RULE")]
    explain: Option<String>,
    /// Previous JSON report whose findings are not reported again.
    #[arg(long, value_name = "JSON")]
    baseline: Option<PathBuf>,
    /// Include findings silenced by suppression comments.
    #[arg(long)]
    show_suppressed: bool,
    /// Analyze files that look minified or generated.
    #[arg(long)]
    include_minified: bool,
    /// Parse problems make the run fail.
    #[arg(long)]
    strict_parse: bool,
    /// Report every `http://` literal, not only those used as URLs.
    #[arg(long)]
    strict_http: bool,
    /// Colorize text output.
    #[arg(long, value_enum, default_value = "auto")]
    color: ColorChoice,
    /// Analyze on one thread.
    #[arg(long)]
    sequential: bool,
}

/// Captured result of one invocation.
#[derive(Debug, Default)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: u8, message: impl std::fmt::Display) -> Self {
        Output { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Run the command with `args` (program name first). `stdin` is used for
/// the `-` input.
pub fn run(args: &[String], stdin: &str) -> Output {
    match std::env::current_dir() {
        Ok(cwd) => run_in(args, stdin, &cwd),
        Err(e) => Output::fail(EXIT_INTERNAL, format!("cannot read the working directory: {e}")),
    }
}

/// Like [`run`], resolving inputs and display paths against `cwd`.
pub fn run_in(args: &[String], stdin: &str, cwd: &Path) -> Output {
    let opts = match CliOptions::try_parse_from(args) {
        Ok(o) => o,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_CLEAN };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };

    if opts.list_rules {
        return Output { code: EXIT_CLEAN, stdout: rules_table(), stderr: String::new() };
    }
    if let Some(rule) = &opts.explain {
        return match rule.parse::<RuleId>() {
            Ok(id) => Output { code: EXIT_CLEAN, stdout: explain(id), stderr: String::new() },
            Err(e) => Output::fail(EXIT_USAGE, e),
        };
    }
    if opts.inputs.is_empty() {
        return Output::fail(EXIT_USAGE, "no inputs given (try `jssec .` or `jssec --help`)");
    }

    let config_path =
        opts.config.clone().or_else(|| std::env::var_os("JSSEC_CONFIG").map(PathBuf::from)).map(|p| cwd.join(p));
    let mut cfg = match load_config(config_path.as_deref()) {
        Ok(c) => c,
        Err(e) => return Output::fail(EXIT_CONFIG, e),
    };
    apply_flags(&mut cfg, &opts);

    let mut stderr = String::new();
    for w in &cfg.warnings {
        stderr.push_str(&format!("warning: config: {w}\n"));
    }

    let discovered = match discover_inputs(&opts.inputs, cwd, &cfg) {
        Ok(d) => d,
        Err(e) => return Output::fail(EXIT_USAGE, e),
    };

    let mut input = AnalysisInput::new();
    for file in &discovered {
        match file {
            DiscoveredInput::Stdin => input.add_file("<stdin>", stdin, &cfg),
            DiscoveredInput::File { path, display } => match std::fs::read(path) {
                Ok(bytes) => input.add_file(display, &String::from_utf8_lossy(&bytes), &cfg),
                Err(e) => return Output::fail(EXIT_INTERNAL, format!("cannot read {display}: {e}")),
            },
        }
    }

    let mode = if opts.sequential { ExecutionMode::Sequential } else { ExecutionMode::Parallel };
    let mut result = Engine::new(&cfg).with_mode(mode).run(&input);

    if let Some(path) = &opts.baseline {
        let text = match std::fs::read_to_string(cwd.join(path)) {
            Ok(t) => t,
            Err(e) => return Output::fail(EXIT_USAGE, format!("cannot read baseline {}: {e}", path.display())),
        };
        if let Err(e) = apply_baseline(&mut result, &text) {
            return Output::fail(EXIT_USAGE, e);
        }
    }

    let color = match opts.color {
        ColorChoice::Always => true,
        ColorChoice::Never => false,
        ColorChoice::Auto => std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal(),
    };
    let format = match opts.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Sarif => Format::Sarif,
    };
    let stdout = render(&result, format, RenderOptions { color, show_suppressed: opts.show_suppressed });

    let fail_level = match opts.fail_level {
        LevelArg::Info => Severity::Info,
        LevelArg::Warning => Severity::Warning,
        LevelArg::Error => Severity::Error,
    };
    let parse_failed = cfg.strict_parse && result.parse_failures() > 0;
    let code = if result.has_rule_crash() {
        EXIT_INTERNAL
    } else if result.count_at_least(fail_level) > 0 || parse_failed {
        EXIT_FINDINGS
    } else {
        EXIT_CLEAN
    };
    Output { code, stdout, stderr }
}

fn apply_flags(cfg: &mut AnalyzerConfig, opts: &CliOptions) {
    if let Some(p) = opts.profile {
        cfg.profile = match p {
            ProfileArg::All => Profile::All,
            ProfileArg::Client => Profile::Client,
            ProfileArg::Server => Profile::Server,
        };
    }
    cfg.include_minified |= opts.include_minified;
    cfg.strict_parse |= opts.strict_parse;
    cfg.strict_http |= opts.strict_http;
}
