#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use protoplate::{Record, Value};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn fixture(name: &str) -> String {
    fs::read_to_string(fixtures_dir().join(name)).unwrap_or_else(|e| panic!("reading fixture {name}: {e}"))
}

pub fn prototype_src() -> String {
    fixture("prototype.java")
}

pub fn template_src() -> String {
    fixture("template.java")
}

pub fn data_src() -> String {
    fixture("data.txt")
}

pub fn generated_src() -> String {
    fixture("generated.java")
}

pub fn lexical_texts(source: &str) -> Vec<String> {
    protoplate::tokenize(source, protoplate::TokenizerMode::Lexical)
        .expect("tokenizes")
        .tokens
        .into_iter()
        .map(|t| t.text)
        .collect()
}

/// Base files plus whitespace variants of each: CRLF line endings,
/// tab indentation and doubled blank lines.
pub fn lexing_corpus() -> Vec<(String, String)> {
    let mut base: Vec<(String, String)> = Vec::new();
    for name in [
        "prototype.java",
        "template.java",
        "data.txt",
        "generated.java",
    ] {
        base.push((name.to_owned(), fixture(name)));
    }
    let mut entries: Vec<_> = fs::read_dir(fixtures_dir().join("corpus"))
        .expect("corpus dir")
        .map(|e| e.expect("dir entry").path())
        .collect();
    entries.sort();
    for path in entries {
        let name = format!("corpus/{}", path.file_name().unwrap().to_string_lossy());
        base.push((name, fs::read_to_string(&path).expect("corpus file")));
    }

    let mut corpus = Vec::new();
    for (name, text) in base {
        let lf = text.replace("\r\n", "\n");
        corpus.push((format!("{name}[crlf]"), lf.replace('\n', "\r\n")));
        corpus.push((format!("{name}[tabs]"), text.replace("    ", "\t")));
        corpus.push((format!("{name}[blank-runs]"), text.replace('\n', "\n\n\n")));
        corpus.push((name, text));
    }
    corpus
}

// ---------------------------------------------------------------------------
// Reference data-file parser. Works line by line and shares no code with the
// library parser; it only understands single-line statements.
// ---------------------------------------------------------------------------

pub type RefRecord = Vec<(String, RefValue)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefValue {
    One(String),
    Many(Vec<String>),
}

fn split_outside_quotes(s: &str, delim: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut cur = String::new();
    let mut in_quote = false;
    let mut escaped = false;
    for c in s.chars() {
        if in_quote {
            cur.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_quote = false;
            }
        } else if c == delim {
            parts.push(std::mem::take(&mut cur));
        } else {
            if c == '"' {
                in_quote = true;
            }
            cur.push(c);
        }
    }
    parts.push(cur);
    parts
}

fn ref_value(raw: &str) -> String {
    let raw = raw.trim();
    if let Some(inner) = raw.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
        inner.replace("\\\\", "\u{0}").replace("\\\"", "\"").replace("\\n", "\n").replace('\u{0}', "\\")
    } else {
        raw.to_owned()
    }
}

pub fn reference_parse(text: &str) -> Vec<RefRecord> {
    let mut records = Vec::new();
    let mut current: RefRecord = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == "---" {
            if !current.is_empty() {
                records.push(std::mem::take(&mut current));
            }
            continue;
        }
        let statements = split_outside_quotes(trimmed, ';');
        let (complete, tail) = statements.split_at(statements.len() - 1);
        let tail = tail[0].trim();
        assert!(tail.is_empty() || tail.starts_with('#'), "reference parser: junk after last `;`: {tail:?}");
        for stmt in complete {
            let (key, rhs) = stmt.split_once('=').expect("reference parser: statement without `=`");
            let key = key.trim().to_owned();
            let values: Vec<String> = split_outside_quotes(rhs, ',').iter().map(|v| ref_value(v)).collect();
            let value = if values.len() == 1 {
                RefValue::One(values.into_iter().next().unwrap())
            } else {
                RefValue::Many(values)
            };
            if current.iter().any(|(k, _)| *k == key) {
                records.push(std::mem::take(&mut current));
            }
            current.push((key, value));
        }
    }
    if !current.is_empty() {
        records.push(current);
    }
    records
}

pub fn to_reference(records: &[Record]) -> Vec<RefRecord> {
    records
        .iter()
        .map(|r| {
            r.iter()
                .map(|(k, v)| {
                    let v = match v {
                        Value::Scalar(s) => RefValue::One(s.clone()),
                        Value::List(items) => RefValue::Many(items.clone()),
                    };
                    (k.to_owned(), v)
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Random grammar-conforming data files.
// ---------------------------------------------------------------------------

const KEYS: &[&str] = &["name", "kind", "fields", "table", "x", "_y2", "Label"];
const BARE_CHARS: &[char] = &['a', 'b', 'Z', '0', '9', '_', '.', '-', '/', '(', ')', ' ', '\t', 'é'];
const QUOTED_CHARS: &[char] = &['a', ' ', ',', ';', '#', '"', '\\', '\n', '=', '-', 'λ', '\t'];

fn random_bare<R: Rng>(rng: &mut R) -> String {
    loop {
        let len = rng.gen_range(1..8);
        let s: String = (0..len).map(|_| *BARE_CHARS.choose(rng).unwrap()).collect();
        if !s.trim().is_empty() {
            return s;
        }
    }
}

fn escape_quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn random_value_text<R: Rng>(rng: &mut R) -> String {
    if rng.gen_bool(0.6) {
        let bare = random_bare(rng);
        let pad_l = " ".repeat(rng.gen_range(0..3));
        let pad_r = " ".repeat(rng.gen_range(0..3));
        format!("{pad_l}{bare}{pad_r}")
    } else {
        let len = rng.gen_range(0..8);
        let s: String = (0..len).map(|_| *QUOTED_CHARS.choose(rng).unwrap()).collect();
        format!(" {}", escape_quoted(&s))
    }
}

fn random_statement<R: Rng>(rng: &mut R) -> String {
    let key = KEYS.choose(rng).unwrap();
    let n = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(2..5) };
    let values: Vec<String> = (0..n).map(|_| random_value_text(rng)).collect();
    let eq = ["=", " =", "= ", " = "].choose(rng).unwrap();
    format!("{key}{eq}{};", values.join(","))
}

pub fn random_data_file<R: Rng>(rng: &mut R) -> String {
    let mut out = String::new();
    let lines = rng.gen_range(0..14);
    for _ in 0..lines {
        match rng.gen_range(0..10) {
            0 => out.push_str("# a comment; with = signs, \"quotes\"\n"),
            1 => out.push('\n'),
            2 => out.push_str("---\n"),
            _ => {
                let indent = ["", "  ", "\t"].choose(rng).unwrap();
                let count = rng.gen_range(1..4);
                let stmts: Vec<String> = (0..count).map(|_| random_statement(rng)).collect();
                out.push_str(indent);
                out.push_str(&stmts.join(" "));
                if rng.gen_bool(0.2) {
                    out.push_str("  # trailing");
                }
                out.push_str(if rng.gen_bool(0.1) { "\r\n" } else { "\n" });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random templates for the rename/expand commutation check. Every element is
// separated by whitespace so substitutions never fuse with neighbours.
// ---------------------------------------------------------------------------

/// Identifiers that may appear as literal tokens and may be renamed.
pub const RENAMEABLE: &[&str] = &["write", "render", "emit", "Printer", "helper"];
/// Identifiers used only as hole targets.
pub const TARGETS: &[&str] = &["A", "Target", "placeholder"];
pub const FILLER: &[&str] = &["class", "public", "void", "return", "int", "{", "}", "(", ")", ";", ".", "=", "\"lit\"", "42"];
pub const VALUES: &[&str] = &["Alpha", "Beta", "Gamma", "delta", "Omega"];
pub const SCALAR_KEYS: &[&str] = &["name", "label", "kind"];
pub const LIST_KEYS: &[&str] = &["items", "cols"];

pub struct GeneratedCase {
    pub template: String,
    pub record: Record,
}

fn random_hole<R: Rng>(rng: &mut R, loop_vars: &[String]) -> String {
    let key: String = if !loop_vars.is_empty() && rng.gen_bool(0.5) {
        loop_vars.choose(rng).unwrap().clone()
    } else {
        SCALAR_KEYS.choose(rng).unwrap().to_string()
    };
    let (pattern, target) = match rng.gen_range(0..3) {
        0 => (format!("%{key}%"), TARGETS.choose(rng).unwrap().to_string()),
        1 => (format!("\" %{key}% \""), "\"A\"".to_owned()),
        _ => (format!("get%{key}%"), "getA".to_owned()),
    };
    format!("/*C {pattern} */ {target}")
}

fn random_elements<R: Rng>(rng: &mut R, depth: usize, loop_vars: &mut Vec<String>, out: &mut Vec<String>) {
    let n = rng.gen_range(1..10);
    for _ in 0..n {
        match rng.gen_range(0..12) {
            0..=3 => out.push(RENAMEABLE.choose(rng).unwrap().to_string()),
            4..=7 => out.push(FILLER.choose(rng).unwrap().to_string()),
            8 | 9 => out.push(random_hole(rng, loop_vars)),
            10 if depth < 2 => {
                let var = format!("v{depth}");
                let list = LIST_KEYS.choose(rng).unwrap();
                let sep = if rng.gen_bool(0.5) { " sep \", \"" } else { "" };
                out.push(format!("/*C forall {var} in {list}{sep} */"));
                loop_vars.push(var);
                random_elements(rng, depth + 1, loop_vars, out);
                loop_vars.pop();
                out.push("/*C end */".to_owned());
            }
            11 if depth < 2 => {
                let key = SCALAR_KEYS.choose(rng).unwrap();
                let cond = match rng.gen_range(0..3) {
                    0 => String::new(),
                    1 => format!(" == \"{}\"", VALUES.choose(rng).unwrap()),
                    _ => format!(" != \"{}\"", VALUES.choose(rng).unwrap()),
                };
                out.push(format!("/*C if {key}{cond} */"));
                random_elements(rng, depth + 1, loop_vars, out);
                out.push("/*C end */".to_owned());
            }
            _ => out.push(FILLER.choose(rng).unwrap().to_string()),
        }
    }
}

pub fn random_template<R: Rng>(rng: &mut R) -> String {
    let mut elems = Vec::new();
    random_elements(rng, 0, &mut Vec::new(), &mut elems);
    let mut src = String::new();
    for (i, e) in elems.iter().enumerate() {
        if i > 0 {
            src.push_str(["\n", " ", "  ", "\n    ", "\t"].choose(rng).unwrap());
        }
        src.push_str(e);
    }
    if rng.gen_bool(0.5) {
        src.push('\n');
    }
    src
}

pub fn random_record<R: Rng>(rng: &mut R) -> Record {
    let mut record = Record::new();
    for key in SCALAR_KEYS {
        record.insert(*key, *VALUES.choose(rng).unwrap());
    }
    for key in LIST_KEYS {
        let n = rng.gen_range(0..4);
        let items: Vec<&str> = (0..n).map(|_| *VALUES.choose(rng).unwrap()).collect();
        record.insert(*key, items);
    }
    record
}

pub fn random_case<R: Rng>(rng: &mut R) -> GeneratedCase {
    GeneratedCase {
        template: random_template(rng),
        record: random_record(rng),
    }
}

/// A rename from one literal identifier to a fresh one.
pub fn random_rename<R: Rng>(rng: &mut R) -> (String, String) {
    let from = RENAMEABLE.choose(rng).unwrap().to_string();
    let to = format!("{from}Renamed");
    (from, to)
}
