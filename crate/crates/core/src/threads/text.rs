//! Line-oriented text format for specifications:
//!
//! ```text
//! # comment
//! X = <Y> f.a <Z>
//! Y = tau <X>
//! Z = S
//! W = D
//! ```
//!
//! The first equation's name is the root.

use std::fmt::{self, Write as _};

use super::{validate, Action, Body, Equation, RawBody, T1Policy, ThreadSpec};
use crate::error::{Error, Result};
use crate::syntax::is_ident;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = c.is_whitespace();
    }
    line
}

fn parse_action(token: &str, line: usize, column: usize) -> Result<Action> {
    if token == "tau" {
        return Ok(Action::Tau);
    }
    let (focus, method) = token
        .split_once('.')
        .ok_or_else(|| syntax(line, column, format!("`{token}` is not an action")))?;
    if !is_ident(focus) || method.is_empty() || method.contains(['<', '>']) {
        return Err(syntax(line, column, format!("`{token}` is not an action")));
    }
    Ok(Action::basic(focus, method))
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn column(&self) -> usize {
        self.base + self.pos + 1
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn angle_name(&mut self) -> Result<String> {
        self.skip_ws();
        let col = self.column();
        let rest = &self.text[self.pos..];
        let inner = rest
            .strip_prefix('<')
            .and_then(|r| r.split_once('>'))
            .map(|(name, _)| name.trim());
        match inner {
            Some(name) if is_ident(name) => {
                self.pos += rest.find('>').unwrap() + 1;
                Ok(name.to_string())
            }
            _ => Err(syntax(self.line, col, "expected `<STATE>`")),
        }
    }

    fn word(&mut self) -> (&'a str, usize) {
        self.skip_ws();
        let col = self.column();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '<')
            .unwrap_or(rest.len());
        self.pos += len;
        (&rest[..len], col)
    }
}

fn parse_equations(text: &str) -> Result<Vec<Equation>> {
    let mut equations = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        if line.trim().is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| syntax(line_no, 1, "expected `NAME = BODY`"))?;
        let name = lhs.trim();
        if !is_ident(name) {
            return Err(syntax(line_no, 1, format!("`{name}` is not a state name")));
        }
        let mut cur = Cursor {
            text: rhs,
            pos: 0,
            line: line_no,
            base: lhs.len() + 1,
        };
        cur.skip_ws();
        let body = if cur.text[cur.pos..].starts_with('<') {
            let then = cur.angle_name()?;
            let (token, col) = cur.word();
            let action = parse_action(token, line_no, col)?;
            let otherwise = cur.angle_name()?;
            RawBody::Post {
                action,
                then,
                otherwise,
            }
        } else {
            let (token, col) = cur.word();
            match token {
                "S" => RawBody::Stop,
                "D" => RawBody::Deadlock,
                "tau" => {
                    let then = cur.angle_name()?;
                    RawBody::Post {
                        action: Action::Tau,
                        otherwise: then.clone(),
                        then,
                    }
                }
                _ => return Err(syntax(line_no, col, format!("unexpected `{token}`"))),
            }
        };
        if !cur.at_end() {
            return Err(syntax(line_no, cur.column(), "trailing input"));
        }
        equations.push(Equation {
            name: name.to_string(),
            body,
        });
    }
    Ok(equations)
}

/// Parses the text format and validates the result.
pub fn parse_thread(text: &str, policy: T1Policy) -> Result<ThreadSpec> {
    validate(&parse_equations(text)?, policy)
}

pub(super) fn write_spec(spec: &ThreadSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, (id, body)) in spec.states().enumerate() {
        if i > 0 {
            f.write_char('\n')?;
        }
        write!(f, "{} = ", spec.name(id))?;
        match body {
            Body::Stop => f.write_str("S")?,
            Body::Deadlock => f.write_str("D")?,
            Body::Post {
                action: Action::Tau,
                then,
                ..
            } => write!(f, "tau <{}>", spec.name(*then))?,
            Body::Post {
                action,
                then,
                otherwise,
            } => write!(
                f,
                "<{}> {} <{}>",
                spec.name(*then),
                action,
                spec.name(*otherwise)
            )?,
        }
    }
    Ok(())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: `doublecircle` for S, `square` for D, `circle`
/// otherwise; edges labelled `a:+` / `a:-`, tau edges `tau`.
pub fn to_dot(spec: &ThreadSpec) -> String {
    let mut out = String::from("digraph thread {\n  __start [shape=point];\n");
    for (id, body) in spec.states() {
        let shape = match body {
            Body::Stop => "doublecircle",
            Body::Deadlock => "square",
            Body::Post { .. } => "circle",
        };
        let name = dot_escape(spec.name(id));
        writeln!(out, "  \"{name}\" [shape={shape}];").unwrap();
    }
    writeln!(
        out,
        "  __start -> \"{}\";",
        dot_escape(spec.name(spec.root()))
    )
    .unwrap();
    for (id, body) in spec.states() {
        let Body::Post {
            action,
            then,
            otherwise,
        } = body
        else {
            continue;
        };
        let from = dot_escape(spec.name(id));
        let edge = |to: &str, label: &str| {
            format!(
                "  \"{from}\" -> \"{}\" [label=\"{}\"];\n",
                dot_escape(to),
                dot_escape(label)
            )
        };
        if action.is_tau() {
            out += &edge(spec.name(*then), "tau");
        } else {
            out += &edge(spec.name(*then), &format!("{action}:+"));
            out += &edge(spec.name(*otherwise), &format!("{action}:-"));
        }
    }
    out.push_str("}\n");
    out
}
