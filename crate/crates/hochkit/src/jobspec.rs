//! The job file format.
//!
//! ```text
//! # comments run to the end of the line
//! [ring]
//! p = 2
//! precision = 3
//! eisenstein = [-2, 0]        # optional: E(t) = t^2 + 0·t − 2
//!
//! [algebra]
//! preset = cyclic_group       # truncated_polynomial | cyclic_group | group | custom
//! order = 2
//! matrix_size = 2             # optional: replace A by M_n(A)
//!
//! [job]
//! command = chain r=1 s_max=3
//! ```
//!
//! Several `key=value` pairs may share a line. Values are decimal integers,
//! bare words, or bracketed lists, which may nest. A ring element is an
//! integer or a bracketed list of `π`-adic digits.

use std::fmt::{self, Write as _};

use hochkit_core::{Algebra, ChainRing, RingElem, RingSpec};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid job ({invariant}): {message}")]
    Validation { invariant: String, message: String },
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SpecError {
    SpecError::Parse { line, column, message: message.into() }
}

fn invalid(invariant: &str, message: impl Into<String>) -> SpecError {
    SpecError::Validation { invariant: invariant.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Format::Text, Format::Csv, Format::Json].into_iter().find(|f| f.name() == s)
    }
}

/// A ring element as written in a job file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Int(i64),
    Digits(Vec<u64>),
}

impl Elem {
    pub fn to_ring(&self, ring: &ChainRing) -> RingElem {
        match self {
            Elem::Int(v) => ring.from_int(*v),
            Elem::Digits(d) => ring.from_digits(d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    TruncatedPolynomial { m: usize },
    CyclicGroup { order: usize },
    Group { table: Vec<Vec<usize>> },
    Custom { rank: usize, constants: Vec<Vec<Elem>>, unit: Vec<Elem> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub preset: Preset,
    pub matrix_size: Option<usize>,
    pub enveloping: bool,
}

impl AlgebraSpec {
    pub fn build(&self, ring: &ChainRing) -> hochkit_core::Result<Algebra> {
        let mut a = match &self.preset {
            Preset::TruncatedPolynomial { m } => Algebra::truncated_polynomial(ring, *m)?,
            Preset::CyclicGroup { order } => Algebra::cyclic_group(ring, *order)?,
            Preset::Group { table } => Algebra::group(ring, table)?,
            Preset::Custom { rank, constants, unit } => {
                let consts = constants.iter().map(|v| v.iter().map(|e| e.to_ring(ring)).collect()).collect();
                let unit = unit.iter().map(|e| e.to_ring(ring)).collect();
                Algebra::new(ring, *rank, consts, unit)?
            }
        };
        if self.enveloping {
            a = a.enveloping()?;
        }
        if let Some(n) = self.matrix_size {
            a = a.matrix_algebra(n)?;
        }
        Ok(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// `HH^n(A; A/π^level)`, with `level` defaulting to the ring precision.
    Hh { degree: usize, level: Option<usize> },
    Chain { r: usize, s_max: usize },
    Bockstein { r: usize, degree: usize },
    LesCheck { r: usize, max_degree: usize },
    LevelCheck { r: usize, s1: usize, s2: usize, degree: usize },
    PiShift { r: usize },
    MoritaCheck { r: usize, s_max: usize, n: usize },
    /// Everything known about one automorphism, given by the images of the basis.
    Report { r: usize, images: Vec<Vec<Elem>>, ideal: Option<Vec<Vec<Elem>>> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hh { .. } => "hh",
            Command::Chain { .. } => "chain",
            Command::Bockstein { .. } => "bockstein",
            Command::LesCheck { .. } => "les-check",
            Command::LevelCheck { .. } => "level-check",
            Command::PiShift { .. } => "pi-shift",
            Command::MoritaCheck { .. } => "morita-check",
            Command::Report { .. } => "report",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub ring: RingSpec,
    pub algebra: AlgebraSpec,
    pub command: Command,
    pub format: Format,
}

// ---- lexing ---------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Int(i64),
    Word(String),
    List(Vec<Node>),
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: Node,
    line: usize,
    column: usize,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> SpecError {
        parse_err(self.line, self.column(), message)
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn node(&mut self) -> Result<Node, SpecError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(']') {
                        self.pos += 1;
                        return Ok(Node::List(items));
                    }
                    if !items.is_empty() {
                        if self.peek() != Some(',') {
                            return Err(self.error("expected ',' or ']'"));
                        }
                        self.pos += 1;
                    }
                    items.push(self.node()?);
                }
            }
            Some(c) if c == '-' || c.is_ascii_digit() => {
                let col = self.column();
                let start = self.pos;
                self.pos += 1;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                text.parse().map(Node::Int).map_err(|_| parse_err(self.line, col, format!("bad integer '{text}'")))
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Node::Word(self.ident())),
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
            None => Err(self.error("missing value")),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Split a file into sections of entries. The `command` entry swallows the
/// rest of its line: further pairs on it are ordinary entries.
fn lex(text: &str) -> Result<Vec<(String, usize, Vec<Entry>)>, SpecError> {
    let mut sections: Vec<(String, usize, Vec<Entry>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw);
        let mut cur = Cursor { chars: body.chars().collect(), pos: 0, line };
        cur.skip_ws();
        if cur.peek().is_none() {
            continue;
        }
        if cur.peek() == Some('[') {
            cur.pos += 1;
            let name = cur.ident();
            if cur.peek() != Some(']') {
                return Err(cur.error("expected ']' after section name"));
            }
            cur.pos += 1;
            cur.skip_ws();
            if cur.peek().is_some() {
                return Err(cur.error("trailing text after section header"));
            }
            if !["ring", "algebra", "job"].contains(&name.as_str()) {
                return Err(parse_err(line, 2, format!("unknown section '{name}'")));
            }
            if sections.iter().any(|(s, _, _)| *s == name) {
                return Err(parse_err(line, 2, format!("duplicate section '{name}'")));
            }
            sections.push((name, line, Vec::new()));
            continue;
        }
        let Some(section) = sections.last_mut() else {
            return Err(cur.error("key outside of any section"));
        };
        while cur.peek().is_some() {
            let column = cur.column();
            let key = cur.ident();
            if key.is_empty() {
                return Err(cur.error("expected a key"));
            }
            cur.skip_ws();
            if cur.peek() != Some('=') {
                return Err(cur.error(format!("expected '=' after '{key}'")));
            }
            cur.pos += 1;
            let value = cur.node()?;
            if section.2.iter().any(|e| e.key == key) {
                return Err(parse_err(line, column, format!("duplicate key '{key}'")));
            }
            section.2.push(Entry { key, value, line, column });
            cur.skip_ws();
        }
    }
    Ok(sections)
}

// ---- typed access ---------------------------------------------------------

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
    used: Vec<bool>,
}

impl Section {
    fn new(name: &str, found: Option<(usize, Vec<Entry>)>) -> Result<Self, SpecError> {
        let (line, entries) = found.ok_or_else(|| parse_err(1, 1, format!("missing section [{name}]")))?;
        let used = vec![false; entries.len()];
        Ok(Section { name: name.into(), line, entries, used })
    }

    fn take(&mut self, key: &str) -> Option<&Entry> {
        let i = self.entries.iter().position(|e| e.key == key)?;
        self.used[i] = true;
        Some(&self.entries[i])
    }

    fn require(&mut self, key: &str) -> Result<&Entry, SpecError> {
        let (name, line) = (self.name.clone(), self.line);
        self.take(key).ok_or_else(|| parse_err(line, 1, format!("[{name}] needs '{key}'")))
    }

    fn usize(&mut self, key: &str) -> Result<usize, SpecError> {
        let e = self.require(key)?;
        as_usize(e, &e.value)
    }

    fn opt_usize(&mut self, key: &str) -> Result<Option<usize>, SpecError> {
        match self.take(key) {
            Some(e) => as_usize(e, &e.value).map(Some),
            None => Ok(None),
        }
    }

    fn finish(&self) -> Result<(), SpecError> {
        match self.entries.iter().zip(&self.used).find(|(_, u)| !**u) {
            Some((e, _)) => Err(parse_err(e.line, e.column, format!("unknown key '{}' in [{}]", e.key, self.name))),
            None => Ok(()),
        }
    }
}

fn at(e: &Entry, message: impl Into<String>) -> SpecError {
    parse_err(e.line, e.column, format!("'{}': {}", e.key, message.into()))
}

fn as_usize(e: &Entry, v: &Node) -> Result<usize, SpecError> {
    match v {
        Node::Int(x) if *x >= 0 => Ok(*x as usize),
        _ => Err(at(e, "expected a non-negative integer")),
    }
}

fn as_word<'a>(e: &Entry, v: &'a Node) -> Result<&'a str, SpecError> {
    match v {
        Node::Word(w) => Ok(w),
        _ => Err(at(e, "expected a word")),
    }
}

fn as_list<'a>(e: &Entry, v: &'a Node) -> Result<&'a [Node], SpecError> {
    match v {
        Node::List(items) => Ok(items),
        _ => Err(at(e, "expected a bracketed list")),
    }
}

fn as_elem(e: &Entry, v: &Node) -> Result<Elem, SpecError> {
    match v {
        Node::Int(x) => Ok(Elem::Int(*x)),
        Node::List(items) => items
            .iter()
            .map(|d| match d {
                Node::Int(x) if *x >= 0 => Ok(*x as u64),
                _ => Err(at(e, "digits must be non-negative integers")),
            })
            .collect::<Result<_, _>>()
            .map(Elem::Digits),
        Node::Word(_) => Err(at(e, "expected an integer or a digit list")),
    }
}

fn as_vectors(e: &Entry, v: &Node) -> Result<Vec<Vec<Elem>>, SpecError> {
    as_list(e, v)?
        .iter()
        .map(|row| as_list(e, row)?.iter().map(|x| as_elem(e, x)).collect())
        .collect()
}

// ---- parsing --------------------------------------------------------------

pub fn parse_spec(text: &str) -> Result<JobSpec, SpecError> {
    let mut found = lex(text)?;
    let mut section = |name: &str| {
        let i = found.iter().position(|(s, _, _)| s == name);
        Section::new(name, i.map(|i| found.remove(i)).map(|(_, l, e)| (l, e)))
    };
    let mut ring_s = section("ring")?;
    let mut alg_s = section("algebra")?;
    let mut job_s = section("job")?;

    let p = ring_s.usize("p")? as u64;
    let precision = ring_s.usize("precision")?;
    let ring = match ring_s.take("eisenstein") {
        Some(e) => {
            let coeffs = as_list(e, &e.value)?
                .iter()
                .map(|c| match c {
                    Node::Int(x) => Ok(*x),
                    _ => Err(at(e, "coefficients must be integers")),
                })
                .collect::<Result<Vec<i64>, _>>()?;
            RingSpec::eisenstein(p, coeffs, precision)
        }
        None => RingSpec::unramified(p, precision),
    };
    ring_s.finish()?;

    let preset_entry = alg_s.require("preset")?;
    let preset_name = as_word(preset_entry, &preset_entry.value)?.to_string();
    let preset = match preset_name.as_str() {
        "truncated_polynomial" => Preset::TruncatedPolynomial { m: alg_s.usize("m")? },
        "cyclic_group" => Preset::CyclicGroup { order: alg_s.usize("order")? },
        "group" => {
            let e = alg_s.require("table")?;
            let table = as_list(e, &e.value)?
                .iter()
                .map(|row| as_list(e, row)?.iter().map(|x| as_usize(e, x)).collect())
                .collect::<Result<_, _>>()?;
            Preset::Group { table }
        }
        "custom" => {
            let rank = alg_s.usize("rank")?;
            let e = alg_s.require("constants")?;
            let constants = as_vectors(e, &e.value)?;
            let e = alg_s.require("unit")?;
            let unit = as_list(e, &e.value)?.iter().map(|x| as_elem(e, x)).collect::<Result<_, _>>()?;
            Preset::Custom { rank, constants, unit }
        }
        other => {
            let e = alg_s.require("preset")?;
            return Err(at(e, format!("unknown preset '{other}'")));
        }
    };
    let matrix_size = alg_s.opt_usize("matrix_size")?;
    let enveloping = match alg_s.take("enveloping") {
        Some(e) => match as_word(e, &e.value)? {
            "true" => true,
            "false" => false,
            _ => return Err(at(e, "expected true or false")),
        },
        None => false,
    };
    alg_s.finish()?;
    let algebra = AlgebraSpec { preset, matrix_size, enveloping };

    let e = job_s.require("command")?;
    let command_name = as_word(e, &e.value)?.to_string();
    let command_entry = (e.line, e.column);
    let command = match command_name.as_str() {
        "hh" => Command::Hh { degree: job_s.usize("degree")?, level: job_s.opt_usize("level")? },
        "chain" => Command::Chain { r: job_s.usize("r")?, s_max: job_s.usize("s_max")? },
        "bockstein" => Command::Bockstein { r: job_s.usize("r")?, degree: job_s.usize("degree")? },
        "les-check" => Command::LesCheck { r: job_s.usize("r")?, max_degree: job_s.opt_usize("max_degree")?.unwrap_or(2) },
        "level-check" => Command::LevelCheck {
            r: job_s.usize("r")?,
            s1: job_s.usize("s1")?,
            s2: job_s.usize("s2")?,
            degree: job_s.usize("degree")?,
        },
        "pi-shift" => Command::PiShift { r: job_s.usize("r")? },
        "morita-check" => Command::MoritaCheck { r: job_s.usize("r")?, s_max: job_s.usize("s_max")?, n: job_s.usize("n")? },
        "report" => {
            let r = job_s.usize("r")?;
            let e = job_s.require("images")?;
            let images = as_vectors(e, &e.value)?;
            let ideal = match job_s.take("ideal") {
                Some(e) => Some(as_vectors(e, &e.value)?),
                None => None,
            };
            Command::Report { r, images, ideal }
        }
        other => return Err(parse_err(command_entry.0, command_entry.1, format!("unknown command '{other}'"))),
    };
    let format = match job_s.take("format") {
        Some(e) => Format::parse(as_word(e, &e.value)?).ok_or_else(|| at(e, "expected text, csv or json"))?,
        None => Format::Text,
    };
    job_s.finish()?;

    let job = JobSpec { ring, algebra, command, format };
    validate(&job)?;
    Ok(job)
}

/// Check everything that can be checked without running the job.
pub fn validate(job: &JobSpec) -> Result<(), SpecError> {
    let ring = ChainRing::new(job.ring.clone()).map_err(|e| invalid(e.name(), e.to_string()))?;
    let a = job.algebra.build(&ring).map_err(|e| invalid(e.name(), e.to_string()))?;
    let prec = ring.precision();
    let bad = |what: &str| Err(invalid("BadPrecision", format!("{what} (ring precision {prec})")));
    let degree_cap = |d: usize| {
        if d > 3 {
            Err(invalid("DegreeTooHigh", format!("degree {d} exceeds 3")))
        } else {
            Ok(())
        }
    };
    match &job.command {
        Command::Hh { degree, level } => {
            degree_cap(*degree)?;
            if level.is_some_and(|l| l == 0 || l > prec) {
                return bad("need 1 <= level <= precision");
            }
        }
        Command::Chain { r, s_max } | Command::MoritaCheck { r, s_max, .. } => {
            if *r == 0 || 2 * r > *s_max || *s_max > prec {
                return bad(&format!("need 1 <= r and 2r <= s_max <= precision, got r = {r}, s_max = {s_max}"));
            }
            if let Command::MoritaCheck { n: 0, .. } = job.command {
                return Err(invalid("DimensionMismatch", "matrix size n must be positive"));
            }
        }
        Command::Bockstein { r, degree } => {
            degree_cap(degree + 1)?;
            if *r == 0 || 2 * r > prec {
                return bad(&format!("need 1 <= r and 2r <= precision, got r = {r}"));
            }
        }
        Command::LesCheck { r, max_degree } => {
            degree_cap(max_degree + 1)?;
            if *r == 0 || 2 * r > prec {
                return bad(&format!("need 1 <= r and 2r <= precision, got r = {r}"));
            }
        }
        Command::LevelCheck { r, s1, s2, degree } => {
            degree_cap(*degree)?;
            if *r == 0 || r > s1 || r > s2 || *s1.max(s2) > prec {
                return bad(&format!("need 1 <= r <= s1, s2 <= precision, got r = {r}, s1 = {s1}, s2 = {s2}"));
            }
        }
        Command::PiShift { r } => {
            if *r == 0 || r + 1 > prec {
                return bad(&format!("need 1 <= r and r + 1 <= precision, got r = {r}"));
            }
        }
        Command::Report { r, images, ideal } => {
            if *r == 0 || 2 * r > prec {
                return bad(&format!("need 1 <= r and 2r <= precision, got r = {r}"));
            }
            let n = a.rank();
            if images.len() != n || images.iter().any(|v| v.len() != n) {
                return Err(invalid("DimensionMismatch", format!("images must be {n} vectors of length {n}")));
            }
            if ideal.as_ref().is_some_and(|g| g.iter().any(|v| v.len() != n)) {
                return Err(invalid("DimensionMismatch", format!("ideal generators must have length {n}")));
            }
        }
    }
    Ok(())
}

// ---- serialization --------------------------------------------------------

struct ElemFmt<'a>(&'a Elem);

impl fmt::Display for ElemFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Elem::Int(v) => write!(f, "{v}"),
            Elem::Digits(d) => write!(f, "[{}]", join(d.iter().map(|x| x.to_string()))),
        }
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

fn vectors(rows: &[Vec<Elem>]) -> String {
    format!("[{}]", join(rows.iter().map(|r| format!("[{}]", join(r.iter().map(|e| ElemFmt(e).to_string()))))))
}

/// Canonical text of a job; [`parse_spec`] reads it back unchanged.
pub fn serialize_spec(job: &JobSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[ring]\np = {}\nprecision = {}", job.ring.p, job.ring.precision);
    if let hochkit_core::RingKind::Eisenstein(c) = &job.ring.kind {
        let _ = writeln!(out, "eisenstein = [{}]", join(c.iter().map(|x| x.to_string())));
    }
    out.push_str("\n[algebra]\n");
    match &job.algebra.preset {
        Preset::TruncatedPolynomial { m } => {
            let _ = writeln!(out, "preset = truncated_polynomial\nm = {m}");
        }
        Preset::CyclicGroup { order } => {
            let _ = writeln!(out, "preset = cyclic_group\norder = {order}");
        }
        Preset::Group { table } => {
            let rows = join(table.iter().map(|r| format!("[{}]", join(r.iter().map(|x| x.to_string())))));
            let _ = writeln!(out, "preset = group\ntable = [{rows}]");
        }
        Preset::Custom { rank, constants, unit } => {
            let _ = writeln!(out, "preset = custom\nrank = {rank}\nconstants = {}", vectors(constants));
            let _ = writeln!(out, "unit = [{}]", join(unit.iter().map(|e| ElemFmt(e).to_string())));
        }
    }
    if let Some(n) = job.algebra.matrix_size {
        let _ = writeln!(out, "matrix_size = {n}");
    }
    if job.algebra.enveloping {
        out.push_str("enveloping = true\n");
    }
    out.push_str("\n[job]\n");
    let _ = write!(out, "command = {}", job.command.name());
    match &job.command {
        Command::Hh { degree, level } => {
            let _ = write!(out, " degree={degree}");
            if let Some(l) = level {
                let _ = write!(out, " level={l}");
            }
        }
        Command::Chain { r, s_max } => {
            let _ = write!(out, " r={r} s_max={s_max}");
        }
        Command::Bockstein { r, degree } => {
            let _ = write!(out, " r={r} degree={degree}");
        }
        Command::LesCheck { r, max_degree } => {
            let _ = write!(out, " r={r} max_degree={max_degree}");
        }
        Command::LevelCheck { r, s1, s2, degree } => {
            let _ = write!(out, " r={r} s1={s1} s2={s2} degree={degree}");
        }
        Command::PiShift { r } => {
            let _ = write!(out, " r={r}");
        }
        Command::MoritaCheck { r, s_max, n } => {
            let _ = write!(out, " r={r} s_max={s_max} n={n}");
        }
        Command::Report { r, images, ideal } => {
            let _ = write!(out, " r={r}\nimages = {}", vectors(images));
            if let Some(g) = ideal {
                let _ = write!(out, "\nideal = {}", vectors(g));
            }
        }
    }
    out.push('\n');
    if job.format != Format::Text {
        let _ = writeln!(out, "format = {}", job.format.name());
    }
    out
}
