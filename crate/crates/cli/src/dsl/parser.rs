//! Line-oriented parser for session scripts.

use std::collections::HashMap;
use std::fmt;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ring,
    Ideal,
    Module,
}

/// Variable weights of a declared ring, used for the homogeneity test.
type Weights = HashMap<String, u32>;

#[derive(Default)]
struct Names {
    kinds: HashMap<String, Kind>,
    rings: HashMap<String, Weights>,
    ideal_ring: HashMap<String, String>,
}

pub fn parse(text: &str) -> PResult<Script> {
    let mut names = Names::default();
    let mut stmts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor { src: line, pos: 0, line: i + 1 };
        cur.ws();
        let span = cur.span();
        let kind = statement(&mut cur, &mut names)?;
        stmts.push(Stmt { span, kind });
    }
    Ok(Script { stmts })
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            '\\' if in_str => {
                escaped = !escaped;
                continue;
            }
            '"' if !escaped => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
        escaped = false;
    }
    line
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn span(&self) -> Span {
        Span { line: self.line, col: self.src[..self.pos].chars().count() + 1 }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { span: self.span(), message: message.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Consumes `kw` only when followed by a non-identifier character.
    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.ws();
        let rest = self.rest();
        if rest.starts_with(kw) && !rest[kw.len()..].starts_with(is_word_char) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn end(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected `{}`", self.rest().trim_end()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        self.ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
            .count();
        if len == 0 {
            return self.err("expected a name");
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    /// A name that may contain dashes, such as a check id.
    fn word(&mut self) -> PResult<String> {
        self.ws();
        let rest = self.rest();
        let len = rest.chars().take_while(|&c| is_word_char(c)).count();
        if len == 0 {
            return self.err("expected an identifier");
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn int(&mut self) -> PResult<i64> {
        self.ws();
        let rest = self.rest();
        let neg = rest.starts_with('-');
        let digits = rest[neg as usize..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected an integer");
        }
        let len = neg as usize + digits;
        match rest[..len].parse() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("integer out of range"),
        }
    }

    fn uint<T: TryFrom<i64>>(&mut self) -> PResult<T> {
        let save = self.pos;
        let v = self.int()?;
        match T::try_from(v) {
            Ok(v) if !self.src[save..self.pos].trim_start().starts_with('-') => Ok(v),
            _ => {
                self.pos = save;
                self.ws();
                self.err("expected a nonnegative integer")
            }
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn string(&mut self) -> PResult<String> {
        self.ws();
        let rest = self.rest();
        let mut de = serde_json::Deserializer::from_str(rest).into_iter::<String>();
        match de.next() {
            Some(Ok(s)) if rest.starts_with('"') => {
                self.pos += de.byte_offset();
                Ok(s)
            }
            _ => self.err("expected a quoted string"),
        }
    }

    /// Comma-separated polynomial texts up to the matching `close`.
    fn poly_list(&mut self, open: char, close: char) -> PResult<Vec<PolyText>> {
        self.ws();
        if !self.eat(&open.to_string()) {
            return self.err(format!("expected `{open}`"));
        }
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = self.pos;
        let push = |cur: &Self, start: usize, end: usize, out: &mut Vec<PolyText>| -> PResult<()> {
            let raw = &cur.src[start..end];
            let text = raw.trim();
            if text.is_empty() {
                let at = Cursor { src: cur.src, pos: start, line: cur.line };
                return at.err("empty entry");
            }
            let lead = raw.len() - raw.trim_start().len();
            let at = Cursor { src: cur.src, pos: start + lead, line: cur.line };
            out.push(PolyText { text: text.to_string(), span: at.span() });
            Ok(())
        };
        for (i, c) in self.rest().char_indices() {
            let abs = self.pos + i;
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' if depth > 0 => depth -= 1,
                c if c == close && depth == 0 => {
                    if !(out.is_empty() && self.src[start..abs].trim().is_empty()) {
                        push(self, start, abs, &mut out)?;
                    }
                    self.pos = abs + c.len_utf8();
                    return Ok(out);
                }
                ',' if depth == 0 => {
                    push(self, start, abs, &mut out)?;
                    start = abs + 1;
                }
                _ => {}
            }
        }
        self.pos = self.src.len();
        self.err(format!("missing `{close}`"))
    }
}

fn is_word_char(c: char) -> bool {
    c == '_' || c == '-' || c.is_ascii_alphanumeric()
}

fn statement(cur: &mut Cursor, names: &mut Names) -> PResult<StmtKind> {
    let head_span = cur.span();
    let head = cur.word()?;
    let kind = match head.as_str() {
        "fixture" => StmtKind::Fixture(cur.word()?),
        "anchor" => StmtKind::Anchor(cur.string()?),
        "known-discrepancy" => {
            cur.ws();
            let id_span = cur.span();
            let check = cur.word()?;
            if tensorcoh::checks::find(&check).is_none() {
                return Err(ParseError { span: id_span, message: format!("unknown check `{check}`") });
            }
            StmtKind::KnownDiscrepancy { check, note: cur.string()? }
        }
        "ring" => ring(cur, names)?,
        "ideal" => ideal(cur, names)?,
        "module" => module(cur, names)?,
        "certify" => certify(cur, names)?,
        "expect" => expect(cur)?,
        _ => match command(&head, cur, names)? {
            Some(c) => StmtKind::Command(c),
            None => {
                return Err(ParseError { span: head_span, message: format!("unknown statement `{head}`") });
            }
        },
    };
    cur.end()?;
    Ok(kind)
}

fn fresh_name(cur: &mut Cursor, names: &Names) -> PResult<String> {
    let save = cur.pos;
    let name = cur.ident()?;
    if RESERVED.contains(&name.as_str()) || FUNCTIONS.iter().any(|f| f.0 == name) {
        cur.pos = save;
        cur.ws();
        return cur.err(format!("`{name}` is reserved"));
    }
    if names.kinds.contains_key(&name) {
        cur.pos = save;
        cur.ws();
        return cur.err(format!("`{name}` is already defined"));
    }
    Ok(name)
}

const RESERVED: &[&str] = &["ideal", "coker", "poly", "in", "twists", "bound", "r", "n"];

fn reference(cur: &mut Cursor, names: &Names, want: Kind) -> PResult<String> {
    cur.ws();
    let span = cur.span();
    let name = cur.ident()?;
    match names.kinds.get(&name) {
        None => Err(ParseError { span, message: format!("undefined name `{name}`") }),
        Some(&k) if k != want => {
            Err(ParseError { span, message: format!("`{name}` is not a {}", kind_word(want)) })
        }
        Some(_) => Ok(name),
    }
}

fn kind_word(k: Kind) -> &'static str {
    match k {
        Kind::Ring => "ring",
        Kind::Ideal => "ideal",
        Kind::Module => "module",
    }
}

fn ring(cur: &mut Cursor, names: &mut Names) -> PResult<StmtKind> {
    let name = fresh_name(cur, names)?;
    cur.expect("=")?;
    let def = if cur.eat_keyword("poly") {
        cur.expect("(")?;
        let (mut p, mut vars, mut weights) = (None, None, None);
        loop {
            let key_span = cur.span();
            match cur.ident()?.as_str() {
                "p" => {
                    cur.expect("=")?;
                    p = Some(cur.uint::<u32>()?);
                }
                "vars" => {
                    cur.expect("=")?;
                    vars = Some(cur.list(|c| c.ident())?);
                }
                "weights" => {
                    cur.expect("=")?;
                    weights = Some(cur.list(|c| c.uint::<u32>())?);
                }
                other => {
                    return Err(ParseError { span: key_span, message: format!("unknown ring option `{other}`") });
                }
            }
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
        let Some(vars) = vars else {
            return cur.err("ring needs `vars=[...]`");
        };
        if let Some(w) = &weights {
            if w.len() != vars.len() {
                return cur.err("`weights` and `vars` differ in length");
            }
        }
        let w = weights.clone().unwrap_or_else(|| vec![1; vars.len()]);
        names.rings.insert(name.clone(), vars.iter().cloned().zip(w).collect());
        RingDef::Poly { p, vars, weights }
    } else {
        let ambient = reference(cur, names, Kind::Ring)?;
        cur.expect("/")?;
        let span = cur.span();
        let ideal = reference(cur, names, Kind::Ideal)?;
        if names.ideal_ring[&ideal] != ambient {
            return Err(ParseError { span, message: format!("`{ideal}` is not an ideal of `{ambient}`") });
        }
        let w = names.rings[&ambient].clone();
        names.rings.insert(name.clone(), w);
        RingDef::Quotient { ambient, ideal }
    };
    names.kinds.insert(name.clone(), Kind::Ring);
    Ok(StmtKind::Ring { name, def })
}

fn ideal(cur: &mut Cursor, names: &mut Names) -> PResult<StmtKind> {
    let name = fresh_name(cur, names)?;
    cur.expect("=")?;
    let gens = cur.poly_list('(', ')')?;
    if !cur.eat_keyword("in") {
        return cur.err("expected `in <ring>`");
    }
    let ring = reference(cur, names, Kind::Ring)?;
    for g in &gens {
        entry_degree(g, &names.rings[&ring])?;
    }
    names.kinds.insert(name.clone(), Kind::Ideal);
    names.ideal_ring.insert(name.clone(), ring.clone());
    Ok(StmtKind::Ideal { name, gens, ring })
}

fn module(cur: &mut Cursor, names: &mut Names) -> PResult<StmtKind> {
    let name = fresh_name(cur, names)?;
    cur.expect("=")?;
    let def = if cur.eat_keyword("coker") {
        let ring = reference(cur, names, Kind::Ring)?;
        let rows = cur.list(|c| c.poly_list('[', ']'))?;
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || rows.iter().any(|r| r.len() != ncols) {
            return cur.err("matrix rows must be nonempty and of equal length");
        }
        let weights = &names.rings[&ring];
        let mut degs = Vec::new();
        for row in &rows {
            degs.push(row.iter().map(|e| entry_degree(e, weights)).collect::<PResult<Vec<_>>>()?);
        }
        let twists = if cur.eat_keyword("twists") {
            let gens = cur.list(|c| c.int().map(|v| v as i32))?;
            cur.expect("->")?;
            let rels = cur.list(|c| c.int().map(|v| v as i32))?;
            if gens.len() != rows.len() || rels.len() != ncols {
                return cur.err(format!("twists must list {} generator and {ncols} relation degrees", rows.len()));
            }
            for (i, row) in rows.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if let Some(d) = degs[i][j] {
                        if d as i32 != rels[j] - gens[i] {
                            return Err(ParseError {
                                span: e.span,
                                message: format!(
                                    "entry `{}` has degree {d}, but the twists need {}",
                                    e.text,
                                    rels[j] - gens[i]
                                ),
                            });
                        }
                    }
                }
            }
            Some((gens, rels))
        } else {
            None
        };
        ModuleDef::Coker { ring, rows, twists }
    } else if cur.eat_keyword("ideal") {
        let gens = cur.poly_list('(', ')')?;
        if !cur.eat_keyword("in") {
            return cur.err("expected `in <ring>`");
        }
        let ring = reference(cur, names, Kind::Ring)?;
        for g in &gens {
            entry_degree(g, &names.rings[&ring])?;
        }
        ModuleDef::Ideal { gens, ring }
    } else {
        ModuleDef::Expr(expr(cur, names)?)
    };
    names.kinds.insert(name.clone(), Kind::Module);
    Ok(StmtKind::Module { name, def })
}

fn certify(cur: &mut Cursor, names: &Names) -> PResult<StmtKind> {
    cur.ws();
    let span = cur.span();
    let name = cur.ident()?;
    let Some(&kind) = names.kinds.get(&name) else {
        return Err(ParseError { span, message: format!("undefined name `{name}`") });
    };
    let prop_span = cur.span();
    let word = cur.word()?;
    let Some(property) = Certificate::ALL.into_iter().find(|c| c.keyword() == word) else {
        return Err(ParseError { span: prop_span, message: format!("unknown certificate `{word}`") });
    };
    let fits = match property {
        Certificate::Buchsbaum => kind != Kind::Ring,
        _ => kind == Kind::Ring,
    };
    if !fits {
        return Err(ParseError { span: prop_span, message: format!("`{word}` does not apply to `{name}`") });
    }
    Ok(StmtKind::Certify { name, property })
}

fn expect(cur: &mut Cursor) -> PResult<StmtKind> {
    cur.ws();
    let mut path = vec![cur.word()?];
    while cur.rest().starts_with('.') {
        cur.pos += 1;
        path.push(cur.word()?);
    }
    cur.expect("=")?;
    cur.ws();
    let rest = cur.rest().trim_end();
    let Some(split) = rest.rfind(char::is_whitespace) else {
        return cur.err("expected `<value> <stated|trivial|frozen>`");
    };
    let tag_word = &rest[split + 1..];
    let tag = match tag_word {
        "stated" => Provenance::Stated,
        "trivial" => Provenance::Trivial,
        "frozen" => Provenance::Frozen,
        _ => {
            cur.pos += split + 1;
            return cur.err(format!("unknown provenance tag `{tag_word}`"));
        }
    };
    let value = match serde_json::from_str(&rest[..split]) {
        Ok(v) => v,
        Err(e) => return cur.err(format!("bad expected value: {e}")),
    };
    cur.pos = cur.src.len();
    Ok(StmtKind::Expect(Expectation { path, value, tag }))
}

fn command(head: &str, cur: &mut Cursor, names: &Names) -> PResult<Option<Command>> {
    let cmd = match head {
        "invariants" => {
            let target = expr(cur, names)?;
            let r = option(cur, "r")?;
            Command::Invariants { target, r }
        }
        "h" => {
            let target = expr(cur, names)?;
            let from = cur.uint()?;
            let to = if cur.eat("..") { Some(cur.uint()?) } else { None };
            if to.is_some_and(|t| t < from) {
                return cur.err("empty range");
            }
            Command::H { target, from, to }
        }
        "length" => Command::Length { target: expr(cur, names)? },
        "resolve" => {
            let target = expr(cur, names)?;
            let bound = if cur.eat_keyword("bound") { Some(cur.uint()?) } else { None };
            Command::Resolve { target, bound }
        }
        "check" => {
            cur.ws();
            let id_span = cur.span();
            let id = cur.word()?;
            if tensorcoh::checks::find(&id).is_none() {
                return Err(ParseError { span: id_span, message: format!("unknown check `{id}`") });
            }
            let m = expr(cur, names)?;
            let n = if cur.at_end() || cur.rest().starts_with("r=") || keyword_next(cur, "ideal") {
                None
            } else {
                Some(expr(cur, names)?)
            };
            let ideal = ideal_option(cur, names)?;
            let r = option(cur, "r")?;
            Command::Check { id, m, n, ideal, r }
        }
        "depthseq" => {
            let target = expr(cur, names)?;
            let n = option(cur, "n")?;
            let ideal = ideal_option(cur, names)?;
            Command::DepthSeq { target, n, ideal }
        }
        "explore" => {
            cur.ws();
            let id_span = cur.span();
            let id = cur.word()?;
            if tensorcoh::checks::find(&id).is_none() {
                return Err(ParseError { span: id_span, message: format!("unknown check `{id}`") });
            }
            let Some(trials) = option(cur, "trials")? else {
                return cur.err("expected `trials=<n>`");
            };
            let seed = option(cur, "seed")?;
            let vars = option(cur, "vars")?;
            Command::Explore { id, trials, seed, vars }
        }
        _ => return Ok(None),
    };
    Ok(Some(cmd))
}

fn keyword_next(cur: &mut Cursor, kw: &str) -> bool {
    let save = cur.pos;
    let hit = cur.eat_keyword(kw);
    cur.pos = save;
    hit
}

fn option<T: TryFrom<i64>>(cur: &mut Cursor, key: &str) -> PResult<Option<T>> {
    cur.ws();
    let pat = format!("{key}=");
    if cur.rest().starts_with(&pat) {
        cur.pos += pat.len();
        Ok(Some(cur.uint()?))
    } else {
        Ok(None)
    }
}

fn ideal_option(cur: &mut Cursor, names: &Names) -> PResult<Option<String>> {
    if cur.eat_keyword("ideal") {
        Ok(Some(reference(cur, names, Kind::Ideal)?))
    } else {
        Ok(None)
    }
}

fn expr(cur: &mut Cursor, names: &Names) -> PResult<Expr> {
    let mut lhs = postfix(cur, names)?;
    while cur.eat("⊗") || cur.eat("&") {
        let rhs = postfix(cur, names)?;
        lhs = Expr::Tensor(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn postfix(cur: &mut Cursor, names: &Names) -> PResult<Expr> {
    let mut e = atom(cur, names)?;
    while cur.rest().starts_with('*') {
        cur.pos += 1;
        e = Expr::Dual(Box::new(e));
    }
    Ok(e)
}

fn atom(cur: &mut Cursor, names: &Names) -> PResult<Expr> {
    if cur.eat("(") {
        let e = expr(cur, names)?;
        cur.expect(")")?;
        return Ok(e);
    }
    cur.ws();
    let span = cur.span();
    let name = cur.ident()?;
    if cur.rest().starts_with('(') {
        let Some((_, shape)) = FUNCTIONS.iter().find(|f| f.0 == name) else {
            return Err(ParseError { span, message: format!("unknown function `{name}`") });
        };
        cur.pos += 1;
        let mut args = Vec::new();
        if !cur.eat(")") {
            loop {
                args.push(arg(cur, names)?);
                if cur.eat(")") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        let arity = shape.split(',').count();
        if args.len() != arity {
            return Err(ParseError { span, message: format!("`{name}` takes ({shape})") });
        }
        return Ok(Expr::Call(name, args));
    }
    if !names.kinds.contains_key(&name) {
        return Err(ParseError { span, message: format!("undefined name `{name}`") });
    }
    Ok(Expr::Name(name))
}

fn arg(cur: &mut Cursor, names: &Names) -> PResult<Arg> {
    match cur.peek() {
        Some('[') => Ok(Arg::List(cur.list(|c| c.int())?)),
        Some(c) if c == '-' || c.is_ascii_digit() => Ok(Arg::Int(cur.int()?)),
        _ => Ok(Arg::Expr(expr(cur, names)?)),
    }
}

/// Degree of a polynomial entry under the ring's weights: `None` when the
/// entry is zero or uses parentheses (checked later, after expansion).
fn entry_degree(e: &PolyText, weights: &Weights) -> PResult<Option<u32>> {
    let fail = |message: String| Err(ParseError { span: e.span, message });
    if e.text.contains(['(', ')']) {
        return Ok(None);
    }
    let mut degs = Vec::new();
    let mut term = String::new();
    let mut terms = Vec::new();
    let mut prev = ' ';
    for c in e.text.chars().filter(|c| !c.is_whitespace()) {
        if (c == '+' || c == '-') && !term.is_empty() && prev != '^' {
            terms.push(std::mem::take(&mut term));
        }
        term.push(c);
        prev = c;
    }
    terms.push(term);
    for t in &terms {
        let body = t.trim_start_matches(['+', '-']);
        if body.is_empty() {
            return fail(format!("malformed entry `{}`", e.text));
        }
        let mut deg = 0u32;
        let mut zero = false;
        for factor in body.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, x)) => match x.parse::<u32>() {
                    Ok(x) => (b, x),
                    Err(_) => return fail(format!("bad exponent in `{}`", e.text)),
                },
                None => (factor, 1),
            };
            if let Ok(c) = base.parse::<u64>() {
                zero |= c == 0;
                continue;
            }
            match weights.get(base) {
                Some(w) => deg += w * exp,
                None => return fail(format!("unknown variable `{base}` in `{}`", e.text)),
            }
        }
        if !zero {
            degs.push(deg);
        }
    }
    match degs.first() {
        None => Ok(None),
        Some(&d) if degs.iter().all(|&x| x == d) => Ok(Some(d)),
        Some(_) => fail(format!("entry `{}` is not homogeneous", e.text)),
    }
}
