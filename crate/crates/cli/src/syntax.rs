//! Line-oriented job files: `[section]` headers, `key = value` lines, `#` comments.

use std::fmt;

use equivar::gm_geometry::Rational;
use equivar::graded_complexes::parse_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// A value with the position of its first character (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub line: usize,
    pub column: usize,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Number(Rational),
    Word(String),
    Quoted(String),
    List(Vec<Spanned>),
}

impl Spanned {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub fn integer(&self) -> Result<i64, ParseError> {
        match &self.value {
            Value::Number(r) if r.is_integer() => {
                i64::try_from(r.to_integer()).map_err(|_| self.error("integer out of range"))
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    pub fn rational(&self) -> Result<Rational, ParseError> {
        match &self.value {
            Value::Number(r) => Ok(r.clone()),
            _ => Err(self.error("expected a rational number p/q")),
        }
    }

    pub fn word(&self) -> Result<&str, ParseError> {
        match &self.value {
            Value::Word(w) => Ok(w),
            _ => Err(self.error("expected a name")),
        }
    }

    pub fn quoted(&self) -> Result<&str, ParseError> {
        match &self.value {
            Value::Quoted(s) => Ok(s),
            _ => Err(self.error("expected a quoted entry")),
        }
    }

    pub fn list(&self) -> Result<&[Spanned], ParseError> {
        match &self.value {
            Value::List(items) => Ok(items),
            _ => Err(self.error("expected a list [..]")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub line: usize,
    pub column: usize,
    pub value: Spanned,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: 1,
            message: message.into(),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Vec<Section>, ParseError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ParseError {
                line,
                column: indent + trimmed.len(),
                message: "section header must end with `]`".into(),
            })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(ParseError {
                    line,
                    column: indent + 1,
                    message: "empty section name".into(),
                });
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(section) = sections.last_mut() else {
            return Err(ParseError {
                line,
                column: indent + 1,
                message: "key outside any section".into(),
            });
        };
        let eq = trimmed.find('=').ok_or_else(|| ParseError {
            line,
            column: indent + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = trimmed[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ParseError {
                line,
                column: indent + 1,
                message: format!("invalid key `{key}`"),
            });
        }
        if section.entries.iter().any(|e| e.key == key) {
            return Err(ParseError {
                line,
                column: indent + 1,
                message: format!("duplicate key `{key}` in [{}]", section.name),
            });
        }
        let value_offset = indent + eq + 1;
        let value = parse_value(&trimmed[eq + 1..], line, value_offset)?;
        section.entries.push(Entry {
            key: key.to_string(),
            line,
            column: indent + 1,
            value,
        });
    }
    Ok(sections)
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Parses one value; `offset` is the number of characters before `text` on the line.
pub fn parse_value(text: &str, line: usize, offset: usize) -> Result<Spanned, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = ValueParser {
        chars,
        pos: 0,
        line,
        offset,
    };
    p.skip_space();
    let v = p.value()?;
    p.skip_space();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct ValueParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    offset: usize,
}

impl ValueParser {
    fn column(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_space(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn spanned(&self, column: usize, value: Value) -> Spanned {
        Spanned {
            line: self.line,
            column,
            value,
        }
    }

    fn value(&mut self) -> Result<Spanned, ParseError> {
        let column = self.column();
        match self.peek() {
            None => Err(self.error("missing value")),
            Some('[') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_space();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    return Ok(self.spanned(column, Value::List(items)));
                }
                loop {
                    self.skip_space();
                    items.push(self.value()?);
                    self.skip_space();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            return Ok(self.spanned(column, Value::List(items)));
                        }
                        _ => return Err(self.error("expected `,` or `]`")),
                    }
                }
            }
            Some('"') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c != '"') {
                    self.pos += 1;
                }
                if self.peek().is_none() {
                    return Err(ParseError {
                        line: self.line,
                        column,
                        message: "unterminated quoted entry".into(),
                    });
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                Ok(self.spanned(column, Value::Quoted(s)))
            }
            Some(_) => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| !c.is_whitespace() && !matches!(c, ',' | ']' | '[' | '"'))
                {
                    self.pos += 1;
                }
                let token: String = self.chars[start..self.pos].iter().collect();
                if token.is_empty() {
                    return Err(self.error("expected a value"));
                }
                let numeric = token.starts_with(|c: char| c.is_ascii_digit())
                    || (token.len() > 1
                        && token.starts_with(['-', '+'])
                        && token[1..].starts_with(|c: char| c.is_ascii_digit()));
                if numeric {
                    let r =
                        parse_rational(token.trim_start_matches('+')).map_err(|_| ParseError {
                            line: self.line,
                            column,
                            message: format!("`{token}` is not a rational number"),
                        })?;
                    Ok(self.spanned(column, Value::Number(r)))
                } else {
                    Ok(self.spanned(column, Value::Word(token)))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_nested_lists() {
        let doc = parse_document(
            "# job\n[space]\nkind = projective\nweights = [0, 1]  # P1\n[job]\na = 1/2\n",
        )
        .unwrap();
        assert_eq!(doc.len(), 2);
        assert_eq!(
            doc[0].entries[1].value.list().unwrap()[1]
                .integer()
                .unwrap(),
            1
        );
        assert_eq!(
            doc[1].entries[0].value.rational().unwrap(),
            Rational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn positions_are_reported() {
        let err = parse_document("[job]\nw = [1, 2\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 10));
        let err = parse_document("w = 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse_document("[job]\n  a = 1/0\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
    }

    #[test]
    fn signs_are_words_and_quotes_hold_hashes() {
        let v = parse_value("[-1/2, +, 1/2, -, \"#\"]", 1, 0).unwrap();
        let items = v.list().unwrap();
        assert_eq!(items[1].word().unwrap(), "+");
        assert_eq!(items[3].word().unwrap(), "-");
        assert_eq!(items[4].quoted().unwrap(), "#");
        assert!(parse_document("[c]\nd0 = [[\"x # y\"]]\n").is_ok());
    }
}
