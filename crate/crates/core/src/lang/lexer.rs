use crate::lang::{is_name_char, LangError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// A possibly prefixed name, kept as written (`obo:ICO_0000322`, `agree`).
    Name(String),
    /// Variable name without the sigil.
    Var(String),
    Int(i64),
    Str(String),
    /// `<...>` contents.
    IriRef(String),
    /// `@prefix`, `@inverse`, ... without the `@`.
    Directive(String),
    /// The name from a `# id: <name>` comment.
    IdComment(String),
    LParen,
    RParen,
    Comma,
    Caret,
    Arrow,
    Dot,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Var(v) => format!("variable `?{v}`"),
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::IriRef(i) => format!("`<{i}>`"),
            Tok::Directive(d) => format!("`@{d}`"),
            Tok::IdComment(_) => "rule id comment".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::Arrow => "`->`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> LangError {
        LangError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            // `-` is a name character, but `->` is always the arrow.
            if c == '-' {
                let mut ahead = self.chars.clone();
                ahead.next();
                if ahead.peek() == Some(&'>') {
                    break;
                }
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn comment(&mut self) -> Option<Tok> {
        self.bump();
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            text.push(c);
            self.bump();
        }
        let rest = text.trim().strip_prefix("id:")?;
        let name = rest.trim();
        (!name.is_empty() && !name.contains(char::is_whitespace)).then(|| Tok::IdComment(name.to_string()))
    }

    fn integer(&mut self, line: usize, col: usize, negative: bool) -> Result<Tok, LangError> {
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err(line, col, "expected digits after `-`"));
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(self.err(line, col, format!("integer `{digits}` has a leading zero")));
        }
        if self.peek().is_some_and(is_name_char) {
            return Err(self.err(line, col, "names may not start with a digit"));
        }
        let text = if negative { format!("-{digits}") } else { digits };
        text.parse::<i64>()
            .map(Tok::Int)
            .map_err(|_| self.err(line, col, format!("integer `{text}` out of range")))
    }

    fn string(&mut self, line: usize, col: usize) -> Result<Tok, LangError> {
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err(line, col, "unterminated string literal")),
                Some('"') => return Ok(Tok::Str(out)),
                Some('\\') => match self.bump() {
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    _ => return Err(self.err(self.line, self.col, "invalid escape in string literal")),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, LangError> {
        loop {
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                return Ok(Some(Token {
                    tok: Tok::Eof,
                    line,
                    col,
                }));
            };
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '#' => match self.comment() {
                    Some(tok) => tok,
                    None => continue,
                },
                '(' | ')' | ',' | '^' | '.' => {
                    self.bump();
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        '^' => Tok::Caret,
                        _ => Tok::Dot,
                    }
                }
                '-' => {
                    self.bump();
                    if self.peek() == Some('>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        self.integer(line, col, true)?
                    }
                }
                '?' => {
                    self.bump();
                    let name = self.take_while(is_name_char);
                    if name.is_empty() {
                        return Err(self.err(line, col, "expected a variable name after `?`"));
                    }
                    Tok::Var(name)
                }
                '@' => {
                    self.bump();
                    let word = self.take_while(|c| c.is_ascii_alphabetic());
                    if word.is_empty() {
                        return Err(self.err(line, col, "expected a directive after `@`"));
                    }
                    Tok::Directive(word)
                }
                '<' => {
                    self.bump();
                    let iri = self.take_while(|c| c != '>' && c != '\n' && !c.is_whitespace());
                    if self.bump() != Some('>') {
                        return Err(self.err(line, col, "unterminated `<...>`"));
                    }
                    Tok::IriRef(iri)
                }
                '"' => {
                    self.bump();
                    self.string(line, col)?
                }
                c if c.is_ascii_digit() => self.integer(line, col, false)?,
                c if c.is_ascii_alphabetic() || c == '_' || c == ':' => {
                    let mut text = self.take_while(is_name_char);
                    if self.peek() == Some(':') {
                        self.bump();
                        text.push(':');
                        text.push_str(&self.take_while(is_name_char));
                    }
                    Tok::Name(text)
                }
                c => return Err(self.err(line, col, format!("unexpected character `{c}`"))),
            };
            return Ok(Some(Token { tok, line, col }));
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, LangError> {
    let mut lexer = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(token) = lexer.next_token()? {
        let eof = token.tok == Tok::Eof;
        out.push(token);
        if eof {
            break;
        }
    }
    Ok(out)
}
