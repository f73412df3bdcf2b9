//! Tokenizer shared by the specification, term, strategy and formula
//! parsers.
//!
//! Tokens are maximal runs of non-blank characters, except that the
//! characters `( ) [ ] { } ,` always form tokens of their own. Each token
//! remembers whether it was preceded by blank space, so that declarations
//! like `op _[_] : ...` can glue adjacent tokens back into one name.

use crate::error::Pos;

const SPECIALS: &[char] = &['(', ')', '[', ']', '{', '}', ','];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub pos: Pos,
    /// Whether blank space (or the start of input) precedes the token.
    pub spaced: bool,
}

impl Token {
    pub fn is(&self, s: &str) -> bool {
        self.text == s
    }
}

fn is_comment_start(rest: &str) -> bool {
    rest.starts_with("***") || rest.starts_with("---")
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut spaced = true;
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            spaced = true;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            spaced = true;
            continue;
        }
        if spaced && is_comment_start(&text[i..]) {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let pos = Pos { line, col };
        let mut tok = String::new();
        if SPECIALS.contains(&c) {
            tok.push(c);
            chars.next();
            col += 1;
        } else {
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || SPECIALS.contains(&c) {
                    break;
                }
                tok.push(c);
                chars.next();
                col += 1;
            }
        }
        out.push(Token { text: tok, pos, spaced });
        spaced = false;
    }
    out
}

/// Splits an operator name fragment into the tokens it consists of.
pub fn split_name(part: &str) -> Vec<String> {
    tokenize(part).into_iter().map(|t| t.text).collect()
}

/// Renders tokens back to text, single-spaced where the source had space.
pub fn join(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 && t.spaced {
            out.push(' ');
        }
        out.push_str(&t.text);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specials_split_tokens() {
        let toks: Vec<_> = tokenize("op _[_] : Soup Soup -> Machine .").into_iter().map(|t| t.text).collect();
        assert_eq!(toks, ["op", "_", "[", "_", "]", ":", "Soup", "Soup", "->", "Machine", "."]);
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("*** comment\n  not(eating) --- trailing\n");
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[0].pos, Pos { line: 2, col: 3 });
        assert!(!toks[1].spaced);
        assert_eq!(join(&toks), "not(eating)");
    }

    #[test]
    fn names_with_symbols_stay_whole() {
        let toks: Vec<_> = tokenize("cross&eat ; G' |= <>").into_iter().map(|t| t.text).collect();
        assert_eq!(toks, ["cross&eat", ";", "G'", "|=", "<>"]);
    }
}
