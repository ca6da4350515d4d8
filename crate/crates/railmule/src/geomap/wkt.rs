//! Minimal WKT reader for LINESTRING / MULTILINESTRING geometry.
//!
//! Whitespace-insensitive; lines whose first non-blank character is `#`
//! are comments. Every other geometry type is rejected.

use crate::error::{Error, Result};

use super::{PathSegment, Point};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    Open,
    Close,
    Comma,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    at_line_start: bool,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, at_line_start: true }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c == Some('\n') {
            self.line += 1;
            self.at_line_start = true;
        } else if c.is_some() && !c.unwrap().is_whitespace() {
            self.at_line_start = false;
        }
        c
    }

    /// Next token with the line it started on.
    fn next_token(&mut self) -> Result<Option<(Token, usize)>> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') if self.at_line_start => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(_) => break,
            }
        }
        let line = self.line;
        let c = *self.chars.peek().unwrap();
        let tok = match c {
            '(' => {
                self.bump();
                Token::Open
            }
            ')' => {
                self.bump();
                Token::Close
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Token::Ident(s.to_ascii_uppercase())
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_digit()
                        || c == '-'
                        || c == '+'
                        || c == '.'
                        || c == 'e'
                        || c == 'E'
                    {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                let n: f64 = s
                    .parse()
                    .map_err(|_| Error::map_format(line, format!("bad number `{s}`")))?;
                if !n.is_finite() {
                    return Err(Error::map_format(line, format!("non-finite number `{s}`")));
                }
                Token::Number(n)
            }
            c => return Err(Error::map_format(line, format!("unexpected character `{c}`"))),
        };
        Ok(Some((tok, line)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Option<(Token, usize)>>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { lexer: Lexer::new(text), peeked: None }
    }

    fn peek(&mut self) -> Result<Option<&(Token, usize)>> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().unwrap().as_ref())
    }

    fn next(&mut self) -> Result<Option<(Token, usize)>> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<usize> {
        match self.next()? {
            Some((tok, line)) if tok == want => Ok(line),
            Some((tok, line)) => {
                Err(Error::map_format(line, format!("expected {what}, found {tok:?}")))
            }
            None => Err(Error::map_format(self.lexer.line, format!("expected {what}, found end of input"))),
        }
    }

    /// `num num (, num num)*` — the body of one linestring.
    fn point_list(&mut self) -> Result<Vec<Point>> {
        let mut pts = Vec::new();
        loop {
            let x = self.number("coordinate")?;
            let y = self.number("coordinate")?;
            pts.push(Point::new(x, y));
            match self.peek()? {
                Some((Token::Comma, _)) => {
                    self.next()?;
                }
                _ => break,
            }
        }
        Ok(pts)
    }

    fn number(&mut self, what: &str) -> Result<f64> {
        match self.next()? {
            Some((Token::Number(n), _)) => Ok(n),
            Some((tok, line)) => {
                Err(Error::map_format(line, format!("expected {what}, found {tok:?}")))
            }
            None => Err(Error::map_format(self.lexer.line, format!("expected {what}, found end of input"))),
        }
    }

    fn linestring_body(&mut self, line: usize) -> Result<Vec<Point>> {
        if let Some((Token::Ident(w), _)) = self.peek()? {
            if w == "EMPTY" {
                self.next()?;
                return Err(Error::map_format(line, "linestring with fewer than 2 points"));
            }
        }
        self.expect(Token::Open, "`(`")?;
        let pts = self.point_list()?;
        self.expect(Token::Close, "`)`")?;
        Ok(pts)
    }
}

/// Parses WKT text into one [`PathSegment`] per linestring, in file order.
/// MULTILINESTRING members become independent segments.
pub fn parse_wkt(text: &str) -> Result<Vec<PathSegment>> {
    let mut parser = Parser::new(text);
    let mut segments = Vec::new();
    while let Some((tok, line)) = parser.next()? {
        let kind = match tok {
            Token::Ident(k) => k,
            other => {
                return Err(Error::map_format(line, format!("expected geometry keyword, found {other:?}")))
            }
        };
        match kind.as_str() {
            "LINESTRING" => {
                let pts = parser.linestring_body(line)?;
                segments.push(segment_from_points(pts, line)?);
            }
            "MULTILINESTRING" => {
                if let Some((Token::Ident(w), _)) = parser.peek()? {
                    if w == "EMPTY" {
                        parser.next()?;
                        return Err(Error::map_format(line, "empty multilinestring"));
                    }
                }
                parser.expect(Token::Open, "`(`")?;
                loop {
                    parser.expect(Token::Open, "`(`")?;
                    let pts = parser.point_list()?;
                    parser.expect(Token::Close, "`)`")?;
                    segments.push(segment_from_points(pts, line)?);
                    match parser.next()? {
                        Some((Token::Comma, _)) => continue,
                        Some((Token::Close, _)) => break,
                        Some((tok, l)) => {
                            return Err(Error::map_format(l, format!("expected `,` or `)`, found {tok:?}")))
                        }
                        None => {
                            return Err(Error::map_format(line, "unterminated multilinestring"))
                        }
                    }
                }
            }
            other => {
                return Err(Error::map_format(line, format!("unsupported geometry type `{other}`")))
            }
        }
    }
    if segments.is_empty() {
        return Err(Error::map_format(1, "no linestring geometry in input"));
    }
    Ok(segments)
}

fn segment_from_points(pts: Vec<Point>, line: usize) -> Result<PathSegment> {
    if pts.len() < 2 {
        return Err(Error::map_format(line, "linestring with fewer than 2 points"));
    }
    PathSegment::new(pts)
        .ok_or_else(|| Error::map_format(line, "linestring collapses to fewer than 2 distinct points"))
}
