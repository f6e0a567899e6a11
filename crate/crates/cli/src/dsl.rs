//! Line-oriented script language.
//!
//! ```text
//! fiber A2 = ak 3 n=2
//! fiber T = plumbing a-b-c, b-d:-1 n=2
//! datum X1 over A2 = [ e1, tw(e2)^2 e1 ]
//! script S on X1 { hurwitzR 1; certify-stab 1 }
//! print invariants X1
//! verify S
//! search X1 depth=4 width=10000
//! ```

use std::fmt;

use lefweave_core::lattice::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub vertices: Vec<String>,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberDef {
    Ak { m: usize, n: u32 },
    Plumbing { chains: Vec<Chain>, n: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleExpr {
    Sphere(String),
    Twist {
        center: String,
        exp: i64,
        inner: Box<CycleExpr>,
    },
    Arc {
        i: usize,
        j: usize,
        preset: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    HurwitzL(usize),
    HurwitzR(usize),
    Rotate,
    Stabilize(Vec<Int>),
    Subflex(Vec<Vec<Int>>),
    Bsum(String),
    CertifyLoose(usize),
    CertifyStab(usize),
    Flexify,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Fiber {
        name: String,
        def: FiberDef,
    },
    Datum {
        name: String,
        fiber: String,
        cycles: Vec<CycleExpr>,
    },
    Script {
        name: String,
        datum: String,
        steps: Vec<ScriptStep>,
    },
    PrintInvariants {
        target: String,
    },
    Verify {
        script: String,
    },
    Search {
        datum: String,
        depth: usize,
        width: usize,
    },
}

/// Parsed file: items in source order with the position of each.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub items: Vec<Item>,
    pub positions: Vec<Pos>,
    /// Position of each name reference, keyed by item index.
    pub refs: Vec<Vec<(String, Pos)>>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
    /// Preceded directly (no whitespace) by the previous token.
    glued: bool,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        let mut glued = false;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: ln + 1,
                col: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                glued = false;
                continue;
            }
            let tok = if is_ident_start(c) {
                let s = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                Tok::Ident(chars[s..i].iter().collect())
            } else if c.is_ascii_digit() {
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(chars[s..i].iter().collect())
            } else if "=[](){},;^:-".contains(c) {
                i += 1;
                Tok::Sym(c)
            } else {
                return Err(ParseError {
                    pos,
                    message: format!("unexpected character `{c}`"),
                });
            };
            out.push(Token { tok, pos, glued });
            glued = true;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    end: Pos,
    refs: Vec<(String, Pos)>,
}

fn describe(t: Option<&Token>) -> String {
    match t.map(|t| &t.tok) {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Int(s)) => format!("`{s}`"),
        Some(Tok::Sym(c)) => format!("`{c}`"),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at)
    }

    fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expected<T>(&self, what: &str) -> Result<T, ParseError> {
        self.err(format!("expected {what}, found {}", describe(self.peek())))
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Sym(d), .. }) if *d == c => {
                self.at += 1;
                Ok(())
            }
            _ => self.expected(&format!("`{c}`")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(d), .. }) if *d == c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.expected("a name"),
        }
    }

    /// A name that must refer to an earlier definition.
    fn reference(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        let s = self.ident()?;
        self.refs.push((s.clone(), pos));
        Ok(s)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) if s == kw => {
                self.at += 1;
                Ok(())
            }
            _ => self.expected(&format!("`{kw}`")),
        }
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Int(s), .. }) => {
                let v = s.parse::<usize>();
                match v {
                    Ok(v) => {
                        self.at += 1;
                        Ok(v)
                    }
                    Err(_) => self.err(format!("integer `{s}` is too large")),
                }
            }
            _ => self.expected("a non-negative integer"),
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let pos = self.pos();
        let v = self.uint()?;
        if v == 0 {
            return Err(ParseError {
                pos,
                message: "positions start at 1".into(),
            });
        }
        Ok(v)
    }

    fn bigint(&mut self) -> Result<Int, ParseError> {
        let neg = self.eat_sym('-');
        match self.peek() {
            Some(Token { tok: Tok::Int(s), glued, .. }) if !neg || *glued => {
                let mut v: Int = s.parse().expect("lexer yields digits");
                if neg {
                    v = -v;
                }
                self.at += 1;
                Ok(v)
            }
            _ => self.expected("an integer"),
        }
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let v = self.bigint()?;
        i64::try_from(&v).map_err(|_| ParseError {
            pos,
            message: format!("integer `{v}` is out of range"),
        })
    }

    fn dim(&mut self) -> Result<u32, ParseError> {
        self.keyword("n")?;
        self.sym('=')?;
        let pos = self.pos();
        let v = self.uint()?;
        if v == 0 || v > 64 {
            return Err(ParseError {
                pos,
                message: format!("dimension n must be in 1..=64, got {v}"),
            });
        }
        Ok(v as u32)
    }

    fn int_list(&mut self) -> Result<Vec<Int>, ParseError> {
        self.sym('[')?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            out.push(self.bigint()?);
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.sym(',')?;
        }
    }

    fn fiber_def(&mut self) -> Result<FiberDef, ParseError> {
        let kind = self.ident()?;
        match kind.as_str() {
            "ak" => {
                let pos = self.pos();
                let m = self.uint()?;
                if m < 2 {
                    return Err(ParseError {
                        pos,
                        message: format!("ak needs at least 2 marked points, got {m}"),
                    });
                }
                let n = self.dim()?;
                Ok(FiberDef::Ak { m, n })
            }
            "plumbing" => {
                let mut chains = Vec::new();
                loop {
                    let mut vertices = vec![self.ident()?];
                    let mut sign = 1;
                    loop {
                        if self.eat_sym('-') {
                            vertices.push(self.ident()?);
                        } else if self.eat_sym(':') {
                            let pos = self.pos();
                            sign = self.small_int()?;
                            if sign != 1 && sign != -1 {
                                return Err(ParseError {
                                    pos,
                                    message: format!("edge sign must be 1 or -1, got {sign}"),
                                });
                            }
                            break;
                        } else {
                            break;
                        }
                    }
                    chains.push(Chain { vertices, sign });
                    if !self.eat_sym(',') {
                        break;
                    }
                }
                let n = self.dim()?;
                Ok(FiberDef::Plumbing { chains, n })
            }
            other => {
                self.at -= 1;
                self.err(format!("unknown fiber kind `{other}`, expected `ak` or `plumbing`"))
            }
        }
    }

    fn cycle(&mut self) -> Result<CycleExpr, ParseError> {
        let name = self.ident()?;
        match name.as_str() {
            "tw" if matches!(self.peek(), Some(Token { tok: Tok::Sym('('), .. })) => {
                self.sym('(')?;
                let center = self.ident()?;
                self.sym(')')?;
                let exp = if self.eat_sym('^') {
                    let pos = self.pos();
                    let e = self.small_int()?;
                    if e == 0 {
                        return Err(ParseError {
                            pos,
                            message: "twist exponent 0 is not allowed".into(),
                        });
                    }
                    e
                } else {
                    1
                };
                let inner = self.cycle()?;
                Ok(CycleExpr::Twist {
                    center,
                    exp,
                    inner: Box::new(inner),
                })
            }
            "arc" if matches!(self.peek(), Some(Token { tok: Tok::Sym('('), .. })) => {
                self.sym('(')?;
                let i = self.index()?;
                self.sym(',')?;
                let j = self.index()?;
                self.sym(';')?;
                let preset = self.ident()?;
                self.sym(')')?;
                Ok(CycleExpr::Arc { i, j, preset })
            }
            _ => Ok(CycleExpr::Sphere(name)),
        }
    }

    fn step(&mut self) -> Result<ScriptStep, ParseError> {
        let pos = self.pos();
        let head = self.ident()?;
        Ok(match head.as_str() {
            "hurwitzL" => ScriptStep::HurwitzL(self.index()?),
            "hurwitzR" => ScriptStep::HurwitzR(self.index()?),
            "rotate" => ScriptStep::Rotate,
            "flexify" => ScriptStep::Flexify,
            "stabilize" => ScriptStep::Stabilize(self.int_list()?),
            "subflex" => {
                self.sym('[')?;
                let mut lists = Vec::new();
                if !self.eat_sym(']') {
                    loop {
                        lists.push(self.int_list()?);
                        if self.eat_sym(']') {
                            break;
                        }
                        self.sym(',')?;
                    }
                }
                ScriptStep::Subflex(lists)
            }
            "bsum" => ScriptStep::Bsum(self.reference()?),
            "certify" => {
                let glued = |p: &Parser| p.peek().is_some_and(|t| t.glued);
                if !(glued(self) && self.eat_sym('-') && glued(self)) {
                    return self.expected("`-loose` or `-stab` after `certify`");
                }
                let rule = self.ident()?;
                match rule.as_str() {
                    "loose" => ScriptStep::CertifyLoose(self.index()?),
                    "stab" => ScriptStep::CertifyStab(self.index()?),
                    other => {
                        self.at -= 1;
                        return self.err(format!("unknown rule `certify-{other}`"));
                    }
                }
            }
            other => {
                return Err(ParseError {
                    pos,
                    message: format!(
                        "unknown script step `{other}`{}",
                        suggestion(other, STEP_NAMES.iter().copied())
                    ),
                })
            }
        })
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let pos = self.pos();
        let head = self.ident()?;
        match head.as_str() {
            "fiber" => {
                let name = self.ident()?;
                self.sym('=')?;
                let def = self.fiber_def()?;
                Ok(Item::Fiber { name, def })
            }
            "datum" => {
                let name = self.ident()?;
                self.keyword("over")?;
                let fiber = self.reference()?;
                self.sym('=')?;
                self.sym('[')?;
                let mut cycles = Vec::new();
                if !self.eat_sym(']') {
                    loop {
                        cycles.push(self.cycle()?);
                        if self.eat_sym(']') {
                            break;
                        }
                        self.sym(',')?;
                    }
                }
                Ok(Item::Datum { name, fiber, cycles })
            }
            "script" => {
                let name = self.ident()?;
                self.keyword("on")?;
                let datum = self.reference()?;
                self.sym('{')?;
                let mut steps = Vec::new();
                loop {
                    if self.eat_sym('}') {
                        break;
                    }
                    if self.eat_sym(';') {
                        continue;
                    }
                    if self.peek().is_none() {
                        return self.expected("`}`");
                    }
                    steps.push(self.step()?);
                }
                Ok(Item::Script { name, datum, steps })
            }
            "print" => {
                self.keyword("invariants")?;
                Ok(Item::PrintInvariants {
                    target: self.reference()?,
                })
            }
            "verify" => Ok(Item::Verify {
                script: self.reference()?,
            }),
            "search" => {
                let datum = self.reference()?;
                self.keyword("depth")?;
                self.sym('=')?;
                let depth = self.uint()?;
                self.keyword("width")?;
                self.sym('=')?;
                let wpos = self.pos();
                let width = self.uint()?;
                if width == 0 {
                    return Err(ParseError {
                        pos: wpos,
                        message: "width must be at least 1".into(),
                    });
                }
                Ok(Item::Search { datum, depth, width })
            }
            other => Err(ParseError {
                pos,
                message: format!(
                    "unknown statement `{other}`{}",
                    suggestion(other, ITEM_NAMES.iter().copied())
                ),
            }),
        }
    }
}

const ITEM_NAMES: &[&str] = &["fiber", "datum", "script", "print", "verify", "search"];
const STEP_NAMES: &[&str] = &[
    "hurwitzL",
    "hurwitzR",
    "rotate",
    "stabilize",
    "subflex",
    "bsum",
    "certify-loose",
    "certify-stab",
    "flexify",
];

/// `", did you mean `x`?"` for the closest candidate, if close enough.
pub fn suggestion<'a>(name: &str, candidates: impl Iterator<Item = &'a str>) -> String {
    let best = candidates
        .map(|c| (strsim::levenshtein(name, c), c))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(b.1)));
    match best {
        Some((d, c)) if d <= name.len().max(2) / 2 + 1 => format!(", did you mean `{c}`?"),
        _ => String::new(),
    }
}

fn defined_name(item: &Item) -> Option<(&str, &'static str)> {
    match item {
        Item::Fiber { name, .. } => Some((name, "fiber")),
        Item::Datum { name, .. } => Some((name, "datum")),
        Item::Script { name, .. } => Some((name, "script")),
        _ => None,
    }
}

/// Parses a whole file and checks that names are unique and defined before use.
pub fn parse(text: &str) -> Result<Workspace, ParseError> {
    let toks = lex(text)?;
    let end = Pos {
        line: text.lines().count().max(1),
        col: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    let mut p = Parser {
        toks,
        at: 0,
        end,
        refs: Vec::new(),
    };
    let mut ws = Workspace::default();
    while p.peek().is_some() {
        let pos = p.pos();
        let line = pos.line;
        let item = p.item()?;
        if let Some(t) = p.peek() {
            let is_script = matches!(item, Item::Script { .. });
            if t.pos.line == line && !is_script {
                return p.err(format!("unexpected {} after statement", describe(Some(t))));
            }
        }
        ws.items.push(item);
        ws.positions.push(pos);
        ws.refs.push(std::mem::take(&mut p.refs));
    }
    resolve(&ws)?;
    Ok(ws)
}

fn resolve(ws: &Workspace) -> Result<(), ParseError> {
    let mut names: Vec<(String, &'static str)> = Vec::new();
    for (idx, item) in ws.items.iter().enumerate() {
        let wanted: Vec<&'static str> = match item {
            Item::Datum { .. } => vec!["fiber"],
            Item::Script { .. } | Item::Search { .. } => vec!["datum"],
            Item::PrintInvariants { .. } => vec!["datum", "script"],
            Item::Verify { .. } => vec!["script"],
            Item::Fiber { .. } => vec![],
        };
        for (k, (name, pos)) in ws.refs[idx].iter().enumerate() {
            // `bsum` targets inside scripts are data
            let kinds: &[&str] = if k == 0 { &wanted } else { &["datum"] };
            match names.iter().find(|(n, _)| n == name) {
                Some((_, kind)) if kinds.contains(kind) => {}
                Some((_, kind)) => {
                    return Err(ParseError {
                        pos: *pos,
                        message: format!("`{name}` is a {kind}, expected a {}", kinds.join(" or ")),
                    })
                }
                None => {
                    let cands = names
                        .iter()
                        .filter(|(_, kd)| kinds.contains(kd))
                        .map(|(n, _)| n.as_str());
                    return Err(ParseError {
                        pos: *pos,
                        message: format!("undefined name `{name}`{}", suggestion(name, cands)),
                    });
                }
            }
        }
        if let Some((name, kind)) = defined_name(item) {
            if names.iter().any(|(n, _)| n == name) {
                return Err(ParseError {
                    pos: ws.positions[idx],
                    message: format!("`{name}` is already defined"),
                });
            }
            names.push((name.to_string(), kind));
        }
    }
    Ok(())
}

fn write_ints(f: &mut fmt::Formatter<'_>, v: &[Int]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl fmt::Display for CycleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleExpr::Sphere(s) => write!(f, "{s}"),
            CycleExpr::Twist { center, exp, inner } => write!(f, "tw({center})^{exp} {inner}"),
            CycleExpr::Arc { i, j, preset } => write!(f, "arc({i},{j}; {preset})"),
        }
    }
}

impl fmt::Display for ScriptStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptStep::HurwitzL(i) => write!(f, "hurwitzL {i}"),
            ScriptStep::HurwitzR(i) => write!(f, "hurwitzR {i}"),
            ScriptStep::Rotate => write!(f, "rotate"),
            ScriptStep::Stabilize(p) => {
                write!(f, "stabilize ")?;
                write_ints(f, p)
            }
            ScriptStep::Subflex(ls) => {
                write!(f, "subflex [")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_ints(f, l)?;
                }
                write!(f, "]")
            }
            ScriptStep::Bsum(d) => write!(f, "bsum {d}"),
            ScriptStep::CertifyLoose(i) => write!(f, "certify-loose {i}"),
            ScriptStep::CertifyStab(i) => write!(f, "certify-stab {i}"),
            ScriptStep::Flexify => write!(f, "flexify"),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Fiber { name, def } => match def {
                FiberDef::Ak { m, n } => write!(f, "fiber {name} = ak {m} n={n}"),
                FiberDef::Plumbing { chains, n } => {
                    write!(f, "fiber {name} = plumbing ")?;
                    for (i, c) in chains.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", c.vertices.join("-"))?;
                        if c.sign != 1 {
                            write!(f, ":{}", c.sign)?;
                        }
                    }
                    write!(f, " n={n}")
                }
            },
            Item::Datum { name, fiber, cycles } => {
                write!(f, "datum {name} over {fiber} = [")?;
                for (i, c) in cycles.iter().enumerate() {
                    write!(f, "{}{c}", if i == 0 { " " } else { ", " })?;
                }
                write!(f, " ]")
            }
            Item::Script { name, datum, steps } => {
                writeln!(f, "script {name} on {datum} {{")?;
                for s in steps {
                    writeln!(f, "  {s};")?;
                }
                write!(f, "}}")
            }
            Item::PrintInvariants { target } => write!(f, "print invariants {target}"),
            Item::Verify { script } => write!(f, "verify {script}"),
            Item::Search { datum, depth, width } => {
                write!(f, "search {datum} depth={depth} width={width}")
            }
        }
    }
}

/// Canonical source text.
impl fmt::Display for Workspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X1: &str = "fiber A2 = ak 3 n=2\ndatum X1 over A2 = [ e1, tw(e2)^2 e1 ]\nprint invariants X1\n";

    #[test]
    fn parses_x1() {
        let ws = parse(X1).unwrap();
        assert_eq!(ws.items.len(), 3);
        assert_eq!(
            ws.items[1],
            Item::Datum {
                name: "X1".into(),
                fiber: "A2".into(),
                cycles: vec![
                    CycleExpr::Sphere("e1".into()),
                    CycleExpr::Twist {
                        center: "e2".into(),
                        exp: 2,
                        inner: Box::new(CycleExpr::Sphere("e1".into()))
                    }
                ]
            }
        );
    }

    #[test]
    fn empty_file() {
        assert!(parse("").unwrap().items.is_empty());
        assert!(parse("# only a comment\n\n").unwrap().items.is_empty());
    }

    #[test]
    fn zero_exponent_rejected() {
        let e = parse("fiber A = ak 3 n=2\ndatum D over A = [ tw(e2)^0 e1 ]").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 27 });
        assert!(e.message.contains("exponent 0"));
    }

    #[test]
    fn undefined_name_suggests() {
        let e = parse("fiber A2 = ak 3 n=2\ndatum X over A3 = [ e1 ]").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 14 });
        assert!(e.message.contains("did you mean `A2`"), "{}", e.message);
        let e = parse("fiber A2 = ak 3 n=2\nprint invariants A2").unwrap_err();
        assert!(e.message.contains("is a fiber"));
    }

    #[test]
    fn duplicate_name() {
        let e = parse("fiber A = ak 3 n=2\nfiber A = ak 4 n=2").unwrap_err();
        assert_eq!(e.pos.line, 2);
    }

    #[test]
    fn plumbing_and_scripts() {
        let src = "fiber T = plumbing a-b-c, b-d:-1 n=3\n\
                   datum D over T = [ a, tw(d)^-1 c ]\n\
                   script S on D {\n  hurwitzL 2; rotate\n  stabilize [1, 0, -1, 0]; certify-stab 3; certify-loose 2\n}\n\
                   script F on D { subflex [[1,0,0,0],[0,0,1,0]]; flexify; bsum D }\n\
                   verify S\nsearch D depth=2 width=5\n";
        let ws = parse(src).unwrap();
        match &ws.items[0] {
            Item::Fiber { def: FiberDef::Plumbing { chains, n }, .. } => {
                assert_eq!(*n, 3);
                assert_eq!(chains[1], Chain { vertices: vec!["b".into(), "d".into()], sign: -1 });
            }
            other => panic!("{other:?}"),
        }
        match &ws.items[2] {
            Item::Script { steps, .. } => assert_eq!(steps.len(), 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_step_suggests() {
        let e = parse("fiber A = ak 3 n=2\ndatum D over A = [ e1 ]\nscript S on D { hurwitzl 1 }").unwrap_err();
        assert!(e.message.contains("did you mean `hurwitzL`"), "{}", e.message);
        assert_eq!(e.pos, Pos { line: 3, col: 17 });
    }

    #[test]
    fn errors_carry_positions() {
        for bad in [
            "fiber A = ak 1 n=2",
            "fiber A = torus 3 n=2",
            "fiber A = ak 3 n=0",
            "fiber A = ak 3 n=2 extra",
            "fiber A = plumbing a-b:2 n=2",
            "fiber A = ak 3 n=2\ndatum D over A = [ e1 e2 ]",
            "fiber A = ak 3 n=2\ndatum D over A = [ arc(1,2 x1.v1) ]",
            "fiber A = ak 3 n=2\ndatum D over A = [ e1 ]\nscript S on D { hurwitzL 0 }",
            "fiber A = ak 3 n=2\ndatum D over A = [ e1 ]\nscript S on D { certify - loose 1 }",
            "fiber A = ak 3 n=2\ndatum D over A = [ e1 ]\nsearch D depth=1 width=0",
            "fiber A = ak 3 n=2 $",
        ] {
            let e = parse(bad).unwrap_err();
            assert!(e.pos.line >= 1 && e.pos.col >= 1, "{bad}: {e}");
        }
    }

    #[test]
    fn pretty_print_round_trip() {
        let src = "fiber T = plumbing a-b-c, b-d:-1 n=2\ndatum D over T = [a,tw(d)^-1 c, arc(1,3; x1.v2)]\n\
                   script S on D { hurwitzL 2;rotate;stabilize [1,0,-1,0] }\nverify S\n";
        let ws = parse(src).unwrap();
        let printed = ws.to_string();
        let again = parse(&printed).unwrap();
        assert_eq!(ws, again);
        assert_eq!(printed, again.to_string());
    }
}
