//! The operator-expression language.
//!
//! ```text
//! expr := atom (whitespace atom)*
//! atom := name ['+'] '(' mode [',' spin] ')' ['@' time]
//! name := A | a | c | psi | alpha
//! spin := up | down | u | d
//! ```
//!
//! `A`, `a`, `c` and `psi` are field operators (`ψ`, or the formal `A` of the
//! abstract model); `alpha` is a quasi-particle. A trailing `+` means dagger.
//! Modes are 1-based here and 0-based everywhere else; a spin label maps
//! `(k, up)` to `2(k−1)` and `(k, down)` to `2(k−1)+1`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Base, OperatorSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomName {
    A,
    LowerA,
    C,
    Psi,
    Alpha,
}

impl AtomName {
    pub fn as_str(self) -> &'static str {
        match self {
            AtomName::A => "A",
            AtomName::LowerA => "a",
            AtomName::C => "c",
            AtomName::Psi => "psi",
            AtomName::Alpha => "alpha",
        }
    }

    fn from_word(word: &str) -> Option<Self> {
        Some(match word {
            "A" => AtomName::A,
            "a" => AtomName::LowerA,
            "c" => AtomName::C,
            "psi" => AtomName::Psi,
            "alpha" => AtomName::Alpha,
            _ => return None,
        })
    }

    pub fn is_field(self) -> bool {
        self != AtomName::Alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Up,
    Down,
}

/// 1-based line and column of an atom's first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

/// One parsed atom. Equality ignores the span.
#[derive(Debug, Clone, Copy)]
pub struct Atom {
    pub name: AtomName,
    pub dagger: bool,
    /// As written, 1-based.
    pub mode: usize,
    pub spin: Option<SpinLabel>,
    pub time: Option<f64>,
    pub span: Span,
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.dagger == other.dagger
            && self.mode == other.mode
            && self.spin == other.spin
            && self.time.map(f64::to_bits) == other.time.map(f64::to_bits)
    }
}

impl Atom {
    /// Internal symbol, 0-based.
    pub fn to_symbol(&self) -> OperatorSymbol {
        let base = match (self.name.is_field(), self.dagger) {
            (true, false) => Base::FieldAnnihilate,
            (true, true) => Base::FieldCreate,
            (false, false) => Base::QuasiAnnihilate,
            (false, true) => Base::QuasiCreate,
        };
        let mode = match self.spin {
            None => self.mode - 1,
            Some(SpinLabel::Up) => 2 * (self.mode - 1),
            Some(SpinLabel::Down) => 2 * (self.mode - 1) + 1,
        };
        OperatorSymbol {
            base,
            mode,
            time: self.time,
        }
    }

    /// Inverse of [`Atom::to_symbol`] for a given field spelling; never
    /// produces spin labels.
    pub fn from_symbol(symbol: &OperatorSymbol, field_name: AtomName) -> Self {
        let (name, dagger) = match symbol.base {
            Base::FieldAnnihilate => (field_name, false),
            Base::FieldCreate => (field_name, true),
            Base::QuasiAnnihilate => (AtomName::Alpha, false),
            Base::QuasiCreate => (AtomName::Alpha, true),
        };
        Atom {
            name,
            dagger,
            mode: symbol.mode + 1,
            spin: None,
            time: symbol.time,
            span: Span::default(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name.as_str())?;
        if self.dagger {
            f.write_str("+")?;
        }
        write!(f, "({}", self.mode)?;
        match self.spin {
            Some(SpinLabel::Up) => f.write_str(",up")?,
            Some(SpinLabel::Down) => f.write_str(",down")?,
            None => {}
        }
        f.write_str(")")?;
        if let Some(t) = self.time {
            write!(f, "@{t:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorExpr {
    pub atoms: Vec<Atom>,
}

impl OperatorExpr {
    pub fn symbols(&self) -> Vec<OperatorSymbol> {
        self.atoms.iter().map(Atom::to_symbol).collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// True if any atom uses one of the given names.
    pub fn uses(&self, name: AtomName) -> bool {
        self.atoms.iter().any(|a| a.name == name)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown operator name `{0}`")]
    UnknownName(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("mode must be a positive integer, got `{0}`")]
    BadMode(String),
    #[error("unknown spin `{0}`, expected up or down")]
    BadSpin(String),
    #[error("malformed time `{0}`")]
    MalformedTime(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            column: self.column,
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.span(), kind)
    }

    fn error_at(&self, span: Span, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: span.line,
            column: span.column,
            kind,
        }
    }

    fn skip_ws(&mut self) -> bool {
        let mut any = false;
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
            any = true;
        }
        any
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Expected(what)))
        }
    }
}

pub fn parse(input: &str) -> Result<OperatorExpr, ParseError> {
    let mut cur = Cursor::new(input);
    let mut atoms = Vec::new();
    cur.skip_ws();
    while cur.peek().is_some() {
        atoms.push(parse_atom(&mut cur)?);
        if !cur.skip_ws() && cur.peek().is_some() {
            return Err(cur.error(ParseErrorKind::Expected("whitespace between atoms")));
        }
    }
    Ok(OperatorExpr { atoms })
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<Atom, ParseError> {
    let span = cur.span();
    let word = cur.take_while(|c| c.is_ascii_alphabetic());
    if word.is_empty() {
        return Err(cur.error(ParseErrorKind::Expected("an operator name")));
    }
    let name = AtomName::from_word(&word).ok_or_else(|| cur.error_at(span, ParseErrorKind::UnknownName(word)))?;
    let dagger = cur.peek() == Some('+');
    if dagger {
        cur.bump();
    }
    cur.expect('(', "`(`")?;
    cur.skip_ws();
    let mode_span = cur.span();
    let digits = cur.take_while(|c| c.is_ascii_digit());
    let mode = match digits.parse::<usize>() {
        Ok(m) if m >= 1 => m,
        _ => {
            let shown = if digits.is_empty() {
                cur.peek().map(String::from).unwrap_or_default()
            } else {
                digits
            };
            return Err(cur.error_at(mode_span, ParseErrorKind::BadMode(shown)));
        }
    };
    cur.skip_ws();
    let mut spin = None;
    if cur.peek() == Some(',') {
        cur.bump();
        cur.skip_ws();
        let spin_span = cur.span();
        let word = cur.take_while(|c| c.is_ascii_alphabetic());
        spin = Some(match word.as_str() {
            "up" | "u" => SpinLabel::Up,
            "down" | "d" => SpinLabel::Down,
            _ => return Err(cur.error_at(spin_span, ParseErrorKind::BadSpin(word))),
        });
        cur.skip_ws();
    }
    cur.expect(')', "`)`")?;
    let mut time = None;
    if cur.peek() == Some('@') {
        cur.bump();
        let time_span = cur.span();
        let text = cur.take_while(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
        match text.parse::<f64>() {
            Ok(t) if t.is_finite() => time = Some(t),
            _ => return Err(cur.error_at(time_span, ParseErrorKind::MalformedTime(text))),
        }
    }
    Ok(Atom {
        name,
        dagger,
        mode,
        spin,
        time,
        span,
    })
}
