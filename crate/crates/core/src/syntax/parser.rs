//! Recursive-descent parser for the program grammar:
//!
//! ```text
//! program := term
//! term    := factor (";" factor)*
//! factor  := instr | "(" term ")" "*"
//! instr   := basic | "+" basic | "-" basic | "#" NAT | "!" | "~"
//! basic   := IDENT "." IDENT
//! ```
//!
//! Whitespace is insignificant and `//` starts a line comment.

use super::{BasicInstruction, Instruction, ProgramTerm, MAX_JUMP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(String),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    while let Some(&c) = chars.peek() {
        let (start_line, start_column) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '/' {
            bump(&mut chars);
            if chars.peek() != Some(&'/') {
                return Err(Error::Syntax {
                    line: start_line,
                    column: start_column,
                    message: "unexpected `/`".into(),
                });
            }
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                s.push(c);
                bump(&mut chars);
            }
            tokens.push(Token {
                tok: Tok::Ident(s),
                line: start_line,
                column: start_column,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                s.push(c);
                bump(&mut chars);
            }
            tokens.push(Token {
                tok: Tok::Nat(s),
                line: start_line,
                column: start_column,
            });
        } else if ";()*.+-#!~".contains(c) {
            bump(&mut chars);
            tokens.push(Token {
                tok: Tok::Punct(c),
                line: start_line,
                column: start_column,
            });
        } else {
            return Err(Error::Syntax {
                line: start_line,
                column: start_column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, token: &Token, expected: &str) -> Result<T> {
        let found = match &token.tok {
            Tok::Ident(s) | Tok::Nat(s) => format!("`{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        };
        Err(Error::Syntax {
            line: token.line,
            column: token.column,
            message: format!("expected {expected}, found {found}"),
        })
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            self.error(&t, &format!("`{c}`"))
        }
    }

    fn term(&mut self) -> Result<ProgramTerm> {
        let mut factors = vec![self.factor()?];
        while self.peek().tok == Tok::Punct(';') {
            self.next();
            factors.push(self.factor()?);
        }
        let mut term = factors.pop().expect("at least one factor");
        while let Some(f) = factors.pop() {
            term = ProgramTerm::concat(f, term);
        }
        Ok(term)
    }

    fn factor(&mut self) -> Result<ProgramTerm> {
        if self.peek().tok == Tok::Punct('(') {
            self.next();
            let body = self.term()?;
            self.expect_punct(')')?;
            self.expect_punct('*')?;
            return Ok(ProgramTerm::repeat(body));
        }
        Ok(ProgramTerm::Instr(self.instruction()?))
    }

    fn instruction(&mut self) -> Result<Instruction> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Punct('+') => {
                self.next();
                Ok(Instruction::PosTest(self.basic()?))
            }
            Tok::Punct('-') => {
                self.next();
                Ok(Instruction::NegTest(self.basic()?))
            }
            Tok::Punct('#') => {
                self.next();
                let n = self.next();
                match &n.tok {
                    Tok::Nat(digits) => match digits.parse::<u64>() {
                        Ok(v) if v <= MAX_JUMP => Ok(Instruction::Jump(v as u32)),
                        Ok(v) => Err(Error::JumpOverflow(v)),
                        Err(_) => Err(Error::JumpOverflow(u64::MAX)),
                    },
                    _ => self.error(&n, "a jump offset"),
                }
            }
            Tok::Punct('!') => {
                self.next();
                Ok(Instruction::Halt)
            }
            Tok::Punct('~') => {
                self.next();
                Ok(Instruction::Shift)
            }
            Tok::Ident(_) => Ok(Instruction::Plain(self.basic()?)),
            _ => self.error(&t, "an instruction"),
        }
    }

    fn basic(&mut self) -> Result<BasicInstruction> {
        let focus = self.next();
        let Tok::Ident(f) = &focus.tok else {
            return self.error(&focus, "a focus");
        };
        self.expect_punct('.')?;
        let method = self.next();
        let Tok::Ident(m) = &method.tok else {
            return self.error(&method, "a method");
        };
        BasicInstruction::new(f.clone(), m.clone())
    }

    fn finish<T>(&mut self, value: T) -> Result<T> {
        let t = self.next();
        if t.tok == Tok::Eof {
            Ok(value)
        } else {
            self.error(&t, "end of input")
        }
    }
}

pub fn parse_program(text: &str) -> Result<ProgramTerm> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let term = p.term()?;
    p.finish(term)
}

/// Parses a single primitive instruction such as `+f.a` or `#3`.
pub fn parse_instruction(text: &str) -> Result<Instruction> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let instr = p.instruction()?;
    p.finish(instr)
}
