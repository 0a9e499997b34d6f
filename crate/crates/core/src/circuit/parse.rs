use super::expr;
use super::{CircuitError, CircuitTemplate, GateKind};

struct Statement {
    text: String,
    line: usize,
}

/// Splits source text into `;`-terminated statements, dropping `//`
/// comments. Each statement carries the line on which it starts.
fn statements(source: &str) -> Result<Vec<Statement>, CircuitError> {
    let mut out = Vec::new();
    let mut buf = String::new();
    let mut start_line = 1;
    for (idx, raw_line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find("//") {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        for ch in line.chars() {
            if buf.trim().is_empty() && !ch.is_whitespace() {
                start_line = line_no;
            }
            if ch == ';' {
                out.push(Statement {
                    text: buf.trim().to_string(),
                    line: start_line,
                });
                buf.clear();
            } else {
                buf.push(ch);
            }
        }
        buf.push(' ');
    }
    if !buf.trim().is_empty() {
        return Err(CircuitError::MalformedStatement {
            statement: buf.trim().to_string(),
            line: start_line,
            reason: "missing `;`".into(),
        });
    }
    Ok(out)
}

fn malformed(stmt: &Statement, reason: impl Into<String>) -> CircuitError {
    CircuitError::MalformedStatement {
        statement: stmt.text.clone(),
        line: stmt.line,
        reason: reason.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `name[index]` into its parts.
fn indexed(s: &str) -> Option<(&str, &str)> {
    let s = s.trim();
    let open = s.find('[')?;
    let inner = s.strip_suffix(']')?.get(open + 1..)?;
    Some((s[..open].trim(), inner.trim()))
}

struct Register {
    name: String,
    size: usize,
}

fn parse_declaration(stmt: &Statement) -> Result<Option<Register>, CircuitError> {
    let text = stmt.text.as_str();
    if let Some(rest) = text.strip_prefix("qubit") {
        if !(rest.starts_with('[') || rest.starts_with(char::is_whitespace)) {
            return Ok(None);
        }
        let rest = rest.trim_start();
        if let Some(after) = rest.strip_prefix('[') {
            let close = after
                .find(']')
                .ok_or_else(|| malformed(stmt, "unterminated register size"))?;
            let size: usize = after[..close]
                .trim()
                .parse()
                .map_err(|_| malformed(stmt, "register size must be an integer"))?;
            let name = after[close + 1..].trim();
            if !is_ident(name) {
                return Err(malformed(stmt, "invalid register name"));
            }
            return Ok(Some(Register {
                name: name.to_string(),
                size,
            }));
        }
        if is_ident(rest) {
            return Ok(Some(Register {
                name: rest.to_string(),
                size: 1,
            }));
        }
        return Ok(None);
    }
    if let Some(rest) = text.strip_prefix("qreg") {
        if !rest.starts_with(char::is_whitespace) {
            return Ok(None);
        }
        let (name, size) = indexed(rest).ok_or_else(|| malformed(stmt, "expected `qreg name[n]`"))?;
        let size: usize = size
            .parse()
            .map_err(|_| malformed(stmt, "register size must be an integer"))?;
        if !is_ident(name) {
            return Err(malformed(stmt, "invalid register name"));
        }
        return Ok(Some(Register {
            name: name.to_string(),
            size,
        }));
    }
    Ok(None)
}

fn split_top_level_commas(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Parses an OpenQASM 3 (or QASM 2 style) program into a [`CircuitTemplate`].
///
/// Numeric gate arguments are folded to radians and kept as literals.
/// A parameterised gate written without an argument list (`ry q[0];`) is
/// accepted as an already-stripped slot. `include` and `barrier`
/// statements are ignored.
pub fn parse_qasm(source: &str) -> Result<CircuitTemplate, CircuitError> {
    let mut register: Option<Register> = None;
    let mut template: Option<CircuitTemplate> = None;

    for stmt in statements(source)? {
        let text = stmt.text.as_str();
        if text.is_empty() {
            continue;
        }
        let keyword = text
            .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .next()
            .unwrap_or("");
        match keyword {
            "OPENQASM" | "include" | "barrier" => continue,
            _ => {}
        }
        if let Some(reg) = parse_declaration(&stmt)? {
            if register.is_some() {
                return Err(malformed(&stmt, "only a single quantum register is supported"));
            }
            if reg.size == 0 {
                return Err(malformed(&stmt, "register must hold at least one qubit"));
            }
            template = Some(CircuitTemplate::new(reg.size));
            register = Some(reg);
            continue;
        }

        if !is_ident(keyword) {
            return Err(malformed(&stmt, "expected a gate call"));
        }
        let kind: GateKind = keyword.parse().map_err(|_| CircuitError::UnsupportedGate {
            name: keyword.to_string(),
            line: stmt.line,
        })?;
        let (reg, tpl) = match (&register, template.as_mut()) {
            (Some(r), Some(t)) => (r, t),
            _ => return Err(CircuitError::MissingQubitDeclaration { line: stmt.line }),
        };

        let mut rest = text[keyword.len()..].trim_start();
        let mut literals = None;
        if let Some(after) = rest.strip_prefix('(') {
            let mut depth = 1;
            let close = after
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(|| malformed(&stmt, "unbalanced parenthesis"))?;
            let args: Vec<f64> = split_top_level_commas(&after[..close])
                .into_iter()
                .map(|a| expr::eval(a).map_err(|e| malformed(&stmt, e)))
                .collect::<Result<_, _>>()?;
            if args.len() != kind.param_arity() {
                return Err(malformed(
                    &stmt,
                    format!(
                        "`{kind}` takes {} argument(s), got {}",
                        kind.param_arity(),
                        args.len()
                    ),
                ));
            }
            literals = Some(args);
            rest = &after[close + 1..];
        }

        let mut wires = Vec::with_capacity(kind.wire_arity());
        for operand in rest.split(',') {
            let (name, idx) =
                indexed(operand).ok_or_else(|| malformed(&stmt, "expected `name[index]` operand"))?;
            if name != reg.name {
                return Err(malformed(&stmt, format!("unknown register `{name}`")));
            }
            let index: usize = idx
                .parse()
                .map_err(|_| malformed(&stmt, "qubit index must be an integer"))?;
            if index >= reg.size {
                return Err(CircuitError::WireOutOfRange {
                    index,
                    num_qubits: reg.size,
                    line: stmt.line,
                });
            }
            wires.push(index);
        }
        if wires.len() != kind.wire_arity() {
            return Err(malformed(
                &stmt,
                format!("`{kind}` acts on {} qubit(s), got {}", kind.wire_arity(), wires.len()),
            ));
        }
        if wires.len() == 2 && wires[0] == wires[1] {
            return Err(malformed(&stmt, "gate wires must be distinct"));
        }
        tpl.push(kind, wires, literals);
    }

    template.ok_or(CircuitError::MissingQubitDeclaration { line: 0 })
}
