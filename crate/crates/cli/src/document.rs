//! Input documents: an optional `key: value` header, a blank line, then one
//! or more bodies separated by `---` lines.
//!
//! ```text
//! # resonant example
//! name: resonant
//! n: 1
//! degree: 4
//! mu: -1
//!
//! x*dx + (-1)*z1*dz1 + x*z1^2*dz1
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use crossing_core::{Error, GaussianRational};

use crate::CliError;

#[derive(Clone, Debug, Default)]
pub struct FieldDocument {
    pub path: String,
    pub name: Option<String>,
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub x_cap: Option<i32>,
    pub mu: Option<Vec<GaussianRational>>,
    pub bodies: Vec<Body>,
}

#[derive(Clone, Debug)]
pub struct Body {
    pub text: String,
    /// 1-based line of the body's first line in the file.
    pub first_line: usize,
}

fn strip_comment(line: &str) -> String {
    match line.find('#') {
        Some(p) => format!("{}{}", &line[..p], " ".repeat(line[p..].chars().count())),
        None => line.to_string(),
    }
}

fn header_key(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    let key = key.trim();
    (!key.is_empty() && key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_'))
        .then_some((key, value))
}

/// Parses a comma-separated list of Gaussian rationals.
pub fn parse_mu_list(text: &str) -> Result<Vec<GaussianRational>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<GaussianRational>()
                .map_err(|e| format!("bad eigenvalue `{s}`: {}", plain_message(&e)))
        })
        .collect()
}

fn plain_message(e: &Error) -> String {
    match e {
        Error::Parse { message, .. } => message.clone(),
        other => other.to_string(),
    }
}

impl FieldDocument {
    pub fn parse(path: &str, text: &str) -> Result<Self, CliError> {
        let mut doc = FieldDocument {
            path: path.to_string(),
            ..Default::default()
        };
        let lines: Vec<String> = text.lines().map(strip_comment).collect();
        let at = |line: usize, column: usize, message: String| CliError::Location {
            path: path.to_string(),
            line,
            column,
            message,
        };

        // Header: leading `key: value` lines, ended by a blank line.
        let mut i = 0;
        while i < lines.len() && lines[i].trim().is_empty() {
            i += 1;
        }
        let mut body_start = 0;
        if i < lines.len() && header_key(&lines[i]).is_some() {
            while i < lines.len() && !lines[i].trim().is_empty() {
                let line_no = i + 1;
                let (key, value) = header_key(&lines[i])
                    .ok_or_else(|| at(line_no, 1, "expected `key: value` in the header".into()))?;
                let column = lines[i].find(':').map_or(1, |p| p + 2 + value.len() - value.trim_start().len());
                let value = value.trim();
                let bad = |what: &str| at(line_no, column, format!("bad value for `{key}`: {what}"));
                match key {
                    "name" => doc.name = Some(value.to_string()),
                    "n" => doc.n = Some(value.parse().ok().filter(|&n: &usize| n >= 1).ok_or_else(|| bad("expected a positive integer"))?),
                    "degree" => doc.degree = Some(value.parse().ok().filter(|&d: &u32| d >= 1).ok_or_else(|| bad("expected a positive integer"))?),
                    "x_cap" => doc.x_cap = Some(value.parse().ok().filter(|&c: &i32| c >= 0).ok_or_else(|| bad("expected a non-negative integer"))?),
                    "mu" => doc.mu = Some(parse_mu_list(value).map_err(|m| at(line_no, column, m))?),
                    _ => return Err(at(line_no, 1, format!("unknown header key `{key}`"))),
                }
                i += 1;
            }
            body_start = i;
        }

        let mut current: Vec<String> = Vec::new();
        let mut first = body_start + 1;
        for (k, line) in lines.iter().enumerate().skip(body_start) {
            if line.trim() == "---" {
                doc.push_body(&current, first);
                current.clear();
                first = k + 2;
            } else {
                current.push(line.clone());
            }
        }
        doc.push_body(&current, first);
        Ok(doc)
    }

    fn push_body(&mut self, lines: &[String], first_line: usize) {
        let Some(skip) = lines.iter().position(|l| !l.trim().is_empty()) else {
            return;
        };
        self.bodies.push(Body {
            text: lines[skip..].join("\n"),
            first_line: first_line + skip,
        });
    }

    /// The bodies, checking their count.
    pub fn sections(&self, expected: usize, what: &str) -> Result<&[Body], CliError> {
        if self.bodies.len() != expected {
            return Err(CliError::Usage(format!(
                "{}: expected {what}, found {} section(s)",
                self.path,
                self.bodies.len()
            )));
        }
        Ok(&self.bodies)
    }

    /// `n` from the header, else from `mu`, else the largest `z` index used.
    pub fn arity(&self) -> Result<usize, CliError> {
        if let (Some(n), Some(mu)) = (self.n, &self.mu) {
            if mu.len() != n {
                return Err(CliError::Usage(format!(
                    "{}: header declares n = {n} but {} eigenvalue(s)",
                    self.path,
                    mu.len()
                )));
            }
        }
        if let Some(n) = self.n.or(self.mu.as_ref().map(Vec::len)) {
            return Ok(n);
        }
        let mut n = 1;
        for body in &self.bodies {
            let bytes = body.text.as_bytes();
            for (p, _) in body.text.match_indices('z') {
                if p > 0 && (bytes[p - 1].is_ascii_alphanumeric() && bytes[p - 1] != b'd') {
                    continue;
                }
                let digits: String = body.text[p + 1..].chars().take_while(char::is_ascii_digit).collect();
                if let Ok(k) = digits.parse::<usize>() {
                    n = n.max(k);
                }
            }
        }
        Ok(n)
    }

    /// Maps a parse error inside `body` to a file position.
    pub fn locate(&self, body: &Body, err: Error) -> CliError {
        match err {
            Error::Parse { line, column, message } => CliError::Location {
                path: self.path.clone(),
                line: body.first_line + line - 1,
                column,
                message,
            },
            other => CliError::Core(other),
        }
    }
}
