//! Constant folding for gate-argument expressions such as `-3*pi/4`.

use std::f64::consts::PI;

/// Evaluates a real-valued constant expression made of decimal literals,
/// `pi` (or `π`), `+ - * /`, unary signs and parentheses.
pub(crate) fn eval(src: &str) -> Result<f64, String> {
    let mut p = ExprParser {
        chars: src.chars().collect(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err("empty expression".into());
    }
    let v = p.sum()?;
    if p.peek().is_some() {
        return Err(format!("unexpected `{}` in expression", p.chars[p.pos]));
    }
    if !v.is_finite() {
        return Err("expression is not finite".into());
    }
    Ok(v)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn peek(&mut self) -> Option<char> {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut acc = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err("unbalanced parenthesis".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some('π') => {
                self.pos += 1;
                Ok(PI)
            }
            Some('p') => {
                if self.chars.get(self.pos + 1) == Some(&'i') {
                    self.pos += 2;
                    Ok(PI)
                } else {
                    Err("unknown identifier".into())
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) => Err(format!("unexpected `{c}` in expression")),
            None => Err("truncated expression".into()),
        }
    }

    fn number(&mut self) -> Result<f64, String> {
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if matches!(self.peek_raw(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek_raw(), Some('+' | '-')) {
                self.pos += 1;
            }
            if matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map_err(|_| format!("bad number `{text}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_pi_expressions() {
        assert_eq!(eval("pi/2").unwrap(), PI / 2.0);
        assert_eq!(eval("-3*pi/4").unwrap(), -3.0 * PI / 4.0);
        assert_eq!(eval("π").unwrap(), PI);
        assert_eq!(eval("2*(pi - 1)").unwrap(), 2.0 * (PI - 1.0));
        assert_eq!(eval("0.5").unwrap(), 0.5);
        assert_eq!(eval("-5.0000000000000000e-1").unwrap(), -0.5);
        assert_eq!(eval("1e3").unwrap(), 1000.0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(eval("").is_err());
        assert!(eval("theta").is_err());
        assert!(eval("(1").is_err());
        assert!(eval("1 2").is_err());
        assert!(eval("1/0").is_err());
    }
}
