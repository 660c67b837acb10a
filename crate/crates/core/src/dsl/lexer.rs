use num_bigint::BigInt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Number(BigInt),
    Ident(String),
    Str(String),
    Kw(Keyword),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Assign,
    EqEq,
    Le,
    Ge,
    Lt,
    Gt,
    DotDot,
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    Check,
    Params,
    Require,
    In,
    Even,
    Series,
    Subst,
    Expect,
    Coeff,
    Order,
    Sqrt,
    Binom,
}

impl Keyword {
    fn from_ident(s: &str) -> Option<Keyword> {
        Some(match s {
            "check" => Keyword::Check,
            "params" => Keyword::Params,
            "require" => Keyword::Require,
            "in" => Keyword::In,
            "even" => Keyword::Even,
            "series" => Keyword::Series,
            "subst" => Keyword::Subst,
            "expect" => Keyword::Expect,
            "coeff" => Keyword::Coeff,
            "order" => Keyword::Order,
            "sqrt" => Keyword::Sqrt,
            "binom" => Keyword::Binom,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Check => "check",
            Keyword::Params => "params",
            Keyword::Require => "require",
            Keyword::In => "in",
            Keyword::Even => "even",
            Keyword::Series => "series",
            Keyword::Subst => "subst",
            Keyword::Expect => "expect",
            Keyword::Coeff => "coeff",
            Keyword::Order => "order",
            Keyword::Sqrt => "sqrt",
            Keyword::Binom => "binom",
        }
    }
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Kw(k) => format!("'{}'", k.as_str()),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Assign => "'='".into(),
            Tok::EqEq => "'=='".into(),
            Tok::Le => "'<='".into(),
            Tok::Ge => "'>='".into(),
            Tok::Lt => "'<'".into(),
            Tok::Gt => "'>'".into(),
            Tok::DotDot => "'..'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (1, 1);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let peek = chars.get(i + 1).copied();
        let simple = |t: Tok| Token { tok: t, pos };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '=' if peek == Some('=') => {
                bump!();
                Tok::EqEq
            }
            '=' => Tok::Assign,
            '<' if peek == Some('=') => {
                bump!();
                Tok::Le
            }
            '>' if peek == Some('=') => {
                bump!();
                Tok::Ge
            }
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '.' if peek == Some('.') => {
                bump!();
                Tok::DotDot
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') => {
                            return Err(ParseError::new(pos, "unterminated string literal"));
                        }
                        Some('"') => break,
                        Some(&ch) => {
                            s.push(ch);
                            bump!();
                        }
                    }
                }
                Tok::Str(s)
            }
            d if d.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump!();
                }
                if chars.get(i) == Some(&'.') && chars.get(i + 1) != Some(&'.') {
                    return Err(ParseError::new(
                        Pos { line, col },
                        "decimal literals are not supported; write a fraction p/q",
                    ));
                }
                out.push(simple(Tok::Number(s.parse().expect("digits"))));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    bump!();
                }
                let tok = match Keyword::from_ident(&s) {
                    Some(k) => Tok::Kw(k),
                    None => Tok::Ident(s),
                };
                out.push(simple(tok));
                continue;
            }
            other => {
                return Err(ParseError::new(pos, format!("unexpected character '{other}'")));
            }
        };
        bump!();
        out.push(simple(tok));
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = tokenize("check \"a\" {\n  params n in 1..8 # c\n  order = 2w;\n}").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Kw(Keyword::Check));
        assert_eq!(kinds[1], Tok::Str("a".into()));
        assert_eq!(kinds[6], Tok::Number(1.into()));
        assert_eq!(kinds[7], Tok::DotDot);
        assert_eq!(toks[3].pos, Pos { line: 2, col: 3 });
        assert_eq!(kinds[11], Tok::Number(2.into()));
        assert_eq!(kinds[12], Tok::Ident("w".into()));
    }

    #[test]
    fn rejects_stray_characters() {
        let e = tokenize("check \"x\" { series = 1 @ 2; }").unwrap_err();
        assert_eq!((e.line, e.col), (1, 24));
        assert!(tokenize("1.5").is_err());
        assert!(tokenize("\"open").is_err());
    }
}
