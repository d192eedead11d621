//! Matchers for configurable name and member-path lists.

use regex::{Regex, RegexBuilder};

/// Case-insensitive identifier list. Entries written as `/.../` are regular
/// expressions; everything else must match the whole name.
#[derive(Clone, Debug, Default)]
pub struct NameMatcher {
    literals: Vec<String>,
    regexes: Vec<Regex>,
}

impl NameMatcher {
    pub fn new<S: AsRef<str>>(entries: &[S]) -> Result<Self, regex::Error> {
        let mut m = NameMatcher::default();
        for entry in entries {
            let entry = entry.as_ref();
            match entry.strip_prefix('/').and_then(|e| e.strip_suffix('/')) {
                Some(pattern) if entry.len() >= 2 => {
                    m.regexes.push(RegexBuilder::new(pattern).case_insensitive(true).build()?);
                }
                _ => m.literals.push(entry.to_lowercase()),
            }
        }
        Ok(m)
    }

    pub fn matches(&self, name: &str) -> bool {
        let lower = name.to_lowercase();
        self.literals.contains(&lower) || self.regexes.iter().any(|r| r.is_match(name))
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty() && self.regexes.is_empty()
    }
}

/// How a [`PathMatcher`] compares a pattern against a member path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// The whole path must match.
    Exact,
    /// The pattern must match the trailing segments.
    Suffix,
    /// The pattern must match the leading segments.
    Prefix,
    /// First and last pattern segments match the first and last path
    /// segments (`res.send` matches `res.status().send`).
    Ends,
}

/// Dotted member-path patterns such as `console.log`, `logger.*` or
/// `subtle.digest`. A `*` segment matches any single segment.
#[derive(Clone, Debug)]
pub struct PathMatcher {
    mode: PathMode,
    patterns: Vec<Vec<String>>,
}

const GLOBAL_OBJECTS: &[&str] = &["window", "globalThis", "self"];

impl PathMatcher {
    pub fn new<S: AsRef<str>>(mode: PathMode, entries: &[S]) -> Self {
        let patterns = entries.iter().map(|e| e.as_ref().split('.').map(str::to_string).collect()).collect();
        PathMatcher { mode, patterns }
    }

    /// Match after dropping a leading `window.`/`globalThis.`/`self.` and any
    /// `()` call markers.
    pub fn matches(&self, path: &str) -> bool {
        let segments = normalize(path);
        let segs: Vec<&str> = segments.iter().map(String::as_str).collect();
        self.patterns.iter().any(|p| self.matches_one(p, &segs))
    }

    /// The matching pattern, rendered back to text.
    pub fn find(&self, path: &str) -> Option<String> {
        let segments = normalize(path);
        let segs: Vec<&str> = segments.iter().map(String::as_str).collect();
        self.patterns.iter().find(|p| self.matches_one(p, &segs)).map(|p| p.join("."))
    }

    fn matches_one(&self, pattern: &[String], path: &[&str]) -> bool {
        let seg_eq = |p: &String, s: &str| p == "*" || p == s;
        match self.mode {
            PathMode::Exact => pattern.len() == path.len() && pattern.iter().zip(path).all(|(p, s)| seg_eq(p, s)),
            PathMode::Prefix => pattern.len() <= path.len() && pattern.iter().zip(path).all(|(p, s)| seg_eq(p, s)),
            PathMode::Suffix => {
                pattern.len() <= path.len() && pattern.iter().rev().zip(path.iter().rev()).all(|(p, s)| seg_eq(p, s))
            }
            PathMode::Ends => match (pattern.first(), pattern.last(), path.first(), path.last()) {
                (Some(pf), Some(pl), Some(sf), Some(sl)) if path.len() >= pattern.len() && pattern.len() >= 2 => {
                    seg_eq(pf, sf) && seg_eq(pl, sl)
                }
                _ => false,
            },
        }
    }
}

fn normalize(path: &str) -> Vec<String> {
    let mut segs: Vec<String> = path.split('.').map(|s| s.trim_end_matches("()").to_string()).collect();
    while segs.len() > 1 && GLOBAL_OBJECTS.contains(&segs[0].as_str()) {
        segs.remove(0);
    }
    segs
}

/// Split an identifier into lower-case words: `apiKey` gives `api`, `key`;
/// `DB_PASSWORD` gives `db`, `password`.
pub fn identifier_words(name: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let chars: Vec<char> = name.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            continue;
        }
        let boundary = c.is_uppercase()
            && !current.is_empty()
            && (chars[i - 1].is_lowercase()
                || chars[i - 1].is_ascii_digit()
                || chars.get(i + 1).is_some_and(|n| n.is_lowercase()));
        if boundary {
            words.push(std::mem::take(&mut current));
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Sensitive-name test shared by the secret and logging rules: the whole
/// name (separators removed) or its last word must be listed, and the name
/// must not be allow-listed.
pub fn is_sensitive_name(name: &str, sensitive: &NameMatcher, allow: &NameMatcher) -> bool {
    let words = identifier_words(name);
    let Some(last) = words.last() else { return false };
    let joined: String = words.concat();
    if allow.matches(name) || allow.matches(&joined) {
        return false;
    }
    sensitive.matches(&joined) || sensitive.matches(last)
}

/// Lower-case and strip hyphens, underscores and spaces: `SHA-1` gives `sha1`.
pub fn normalize_algorithm(name: &str) -> String {
    name.chars().filter(|c| !matches!(c, '-' | '_' | ' ')).flat_map(char::to_lowercase).collect()
}

/// Whole-name algorithm match. `aes-128-ecb` matches the entry `AES-ECB`
/// because every entry token appears and the leading tokens agree;
/// `RSA-SHA1` matches `SHA-1` because one of its tokens is the whole entry;
/// `medeske` does not match `DES`.
pub fn algorithm_matches(candidate: &str, entry: &str) -> bool {
    if normalize_algorithm(candidate) == normalize_algorithm(entry) {
        return true;
    }
    let tokens = |s: &str| -> Vec<String> {
        s.split(['-', '_', ' ', '/']).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
    };
    let cand = tokens(candidate);
    let want = tokens(entry);
    let whole = normalize_algorithm(entry);
    if cand.contains(&whole) {
        return true;
    }
    match (cand.first(), want.first()) {
        (Some(c), Some(w)) if c == w => want.iter().all(|t| cand.contains(t)),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(identifier_words("apiKey"), ["api", "key"]);
        assert_eq!(identifier_words("DB_PASSWORD"), ["db", "password"]);
        assert_eq!(identifier_words("userName2"), ["user", "name2"]);
        assert_eq!(identifier_words("HTMLParser"), ["html", "parser"]);
        assert_eq!(identifier_words("$secret"), ["secret"]);
    }

    #[test]
    fn sensitive_names() {
        let s = NameMatcher::new(&["password", "key", "username", "token"]).unwrap();
        let allow = NameMatcher::new(&["keyCode"]).unwrap();
        for name in ["password", "apiKey", "API_KEY", "userName", "authToken", "dbPassword"] {
            assert!(is_sensitive_name(name, &s, &allow), "{name}");
        }
        for name in ["passwordField", "keyCode", "monkey", "userId", "keyboard", "tokens"] {
            assert!(!is_sensitive_name(name, &s, &allow), "{name}");
        }
    }

    #[test]
    fn algorithms() {
        for (c, e) in [
            ("md5", "MD5"),
            ("SHA-1", "SHA-1"),
            ("sha1", "SHA-1"),
            ("aes-128-ecb", "AES-ECB"),
            ("des-ede3-cbc", "DES"),
            ("RC4", "RC4"),
            ("RSA-SHA1", "SHA-1"),
        ] {
            assert!(algorithm_matches(c, e), "{c} {e}");
        }
        for (c, e) in [
            ("sha256", "SHA-1"),
            ("medeske", "DES"),
            ("aes-256-cbc", "AES-ECB"),
            ("sha-512", "SHA-1"),
            ("AES-GCM", "AES-ECB"),
            ("RSA-SHA256", "SHA-1"),
            ("ecdsa", "DSA"),
        ] {
            assert!(!algorithm_matches(c, e), "{c} {e}");
        }
    }

    #[test]
    fn path_modes() {
        let exact = PathMatcher::new(PathMode::Exact, &["console.*", "alert"]);
        assert!(exact.matches("console.log"));
        assert!(exact.matches("window.alert"));
        assert!(!exact.matches("foo.alert"));
        assert!(!exact.matches("console.log.bind"));
        let suffix = PathMatcher::new(PathMode::Suffix, &["subtle.digest", "createHash"]);
        assert!(suffix.matches("window.crypto.subtle.digest"));
        assert!(suffix.matches("require().createHash"));
        let prefix = PathMatcher::new(PathMode::Prefix, &["location", "req.query"]);
        assert!(prefix.matches("window.location.hash"));
        assert!(prefix.matches("req.query.id"));
        assert!(!prefix.matches("req.queryString"));
        let ends = PathMatcher::new(PathMode::Ends, &["res.send"]);
        assert!(ends.matches("res.status().send"));
        assert!(!ends.matches("res.status"));
    }

    #[test]
    fn regex_entries() {
        let m = NameMatcher::new(&["/^sanitize/", "escape"]).unwrap();
        assert!(m.matches("sanitizeName"));
        assert!(m.matches("ESCAPE"));
        assert!(!m.matches("unescape"));
        assert!(NameMatcher::new(&["/(/"]).is_err());
    }
}
