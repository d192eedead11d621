//! Turning command-line inputs into an ordered list of files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Component, Path, PathBuf};

use globset::{Glob, GlobMatcher};
use jssec_core::config::AnalyzerConfig;
use jssec_core::frontend::source_kind;
use walkdir::WalkDir;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscoveredInput {
    Stdin,
    /// `display` is the path relative to the working directory, with `/`.
    File {
        path: PathBuf,
        display: String,
    },
}

#[derive(Debug)]
pub enum InputError {
    Missing(String),
    BadGlob(String, globset::Error),
    Unsupported(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Missing(p) => write!(f, "no such file or directory: {p}"),
            InputError::BadGlob(p, e) => write!(f, "bad glob `{p}`: {e}"),
            InputError::Unsupported(p) => write!(f, "{p} is not a .js, .mjs, .cjs, .html or .htm file"),
        }
    }
}

impl std::error::Error for InputError {}

/// Lexical normalization: drop `.` components and resolve `..` where
/// possible, then render with `/`.
fn display_path(path: &Path, cwd: &Path) -> String {
    let rel = path.strip_prefix(cwd).unwrap_or(path);
    let mut parts: Vec<String> = Vec::new();
    let mut prefix = String::new();
    for c in rel.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                if parts.last().is_some_and(|p| p != "..") {
                    parts.pop();
                } else {
                    parts.push("..".into());
                }
            }
            Component::RootDir => prefix = "/".into(),
            Component::Prefix(p) => prefix = p.as_os_str().to_string_lossy().into_owned(),
            Component::Normal(s) => parts.push(s.to_string_lossy().into_owned()),
        }
    }
    format!("{prefix}{}", parts.join("/"))
}

fn has_glob_meta(s: &str) -> bool {
    s.contains(['*', '?', '[', '{'])
}

/// Directory to walk for a glob: the components before the first one
/// with a metacharacter.
fn glob_base(pattern: &str) -> PathBuf {
    let mut base = PathBuf::new();
    for part in pattern.split('/') {
        if has_glob_meta(part) {
            break;
        }
        base.push(if part.is_empty() { "/" } else { part });
    }
    if base.as_os_str().is_empty() {
        PathBuf::from(".")
    } else {
        base
    }
}

fn walk(
    root: &Path,
    cwd: &Path,
    cfg: &AnalyzerConfig,
    glob: Option<&GlobMatcher>,
    out: &mut BTreeMap<String, PathBuf>,
) {
    let excludes = cfg.matchers().path_excludes;
    let entries = WalkDir::new(root)
        .follow_links(false)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !excludes.is_match(format!("{}/", display_path(e.path(), cwd))));
    for entry in entries.flatten() {
        if !entry.file_type().is_file() {
            continue;
        }
        let display = display_path(entry.path(), cwd);
        if source_kind(&display).is_none() || excludes.is_match(&display) {
            continue;
        }
        if glob.is_some_and(|g| !g.is_match(&display)) {
            continue;
        }
        out.insert(display, entry.path().to_path_buf());
    }
}

/// Expand inputs into files in lexicographic order of their display path.
/// Directories are walked recursively, skipping `path_excludes`; files
/// named explicitly are always included when their extension is
/// supported.
pub fn discover_inputs(
    inputs: &[String],
    cwd: &Path,
    cfg: &AnalyzerConfig,
) -> Result<Vec<DiscoveredInput>, InputError> {
    let mut files: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut stdin = false;
    for raw in inputs {
        if raw == "-" {
            stdin = true;
            continue;
        }
        let path = cwd.join(raw);
        if path.is_dir() {
            walk(&path, cwd, cfg, None, &mut files);
        } else if path.is_file() {
            let display = display_path(&path, cwd);
            if source_kind(&display).is_none() {
                return Err(InputError::Unsupported(raw.clone()));
            }
            files.insert(display, path);
        } else if has_glob_meta(raw) {
            let normalized = raw.replace('\\', "/");
            let pattern = normalized.strip_prefix("./").unwrap_or(&normalized);
            let matcher = Glob::new(pattern).map_err(|e| InputError::BadGlob(raw.clone(), e))?.compile_matcher();
            let base = cwd.join(glob_base(pattern));
            if base.is_dir() {
                walk(&base, cwd, cfg, Some(&matcher), &mut files);
            }
        } else {
            return Err(InputError::Missing(raw.clone()));
        }
    }
    let mut out: Vec<DiscoveredInput> =
        files.into_iter().map(|(display, path)| DiscoveredInput::File { path, display }).collect();
    if stdin {
        out.insert(0, DiscoveredInput::Stdin);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_paths_are_relative_and_slashed() {
        let cwd = Path::new("/work");
        assert_eq!(display_path(Path::new("/work/./src/../a.js"), cwd), "a.js");
        assert_eq!(display_path(Path::new("/work/src/b.js"), cwd), "src/b.js");
        assert_eq!(display_path(Path::new("/elsewhere/c.js"), cwd), "/elsewhere/c.js");
    }

    #[test]
    fn glob_bases() {
        assert_eq!(glob_base("src/**/*.js"), PathBuf::from("src"));
        assert_eq!(glob_base("*.js"), PathBuf::from("."));
    }
}
