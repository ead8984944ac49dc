use thiserror::Error;

use super::{BinaryOp, Expr, NamedConstant, UnaryOp};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    SyntaxError { pos: usize, message: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("exponent at {pos} must be a nonnegative integer literal")]
    NonIntegerExponent { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent part, only if followed by digits
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            tokens.push((Token::Number(text[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push((Token::Ident(text[start..i].to_string()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Token::Op(c),
                '(' => Token::LParen,
                ')' => Token::RParen,
                _ => {
                    return Err(ParseError::SyntaxError {
                        pos: start,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            tokens.push((tok, start));
            i += c.len_utf8();
        }
    }
    tokens.push((Token::End, text.len()));
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    at: usize,
    vars: &'a [String],
}

/// Parses `text` into an [`Expr`] over the named variables.
pub fn parse(text: &str, vars: &[String]) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::SyntaxError {
            pos: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        tokens: tokenize(text)?,
        at: 0,
        vars,
    };
    let e = p.expr()?;
    match p.peek() {
        Token::End => Ok(e),
        other => Err(p.syntax(format!("unexpected {other:?}"))),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError::SyntaxError {
            pos: self.pos(),
            message,
        }
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {want:?}, found {:?}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Op('+') => BinaryOp::Add,
                Token::Op('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Op('*') => BinaryOp::Mul,
                Token::Op('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Token::Op('-') => {
                self.next();
                Ok(Expr::unary(UnaryOp::Neg, self.unary()?))
            }
            Token::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while *self.peek() == Token::Op('^') {
            self.next();
            let pos = self.pos();
            let k = match self.next() {
                Token::Number(text) if text.bytes().all(|b| b.is_ascii_digit()) => text
                    .parse::<u32>()
                    .map_err(|_| ParseError::NonIntegerExponent { pos })?,
                Token::End => {
                    return Err(ParseError::SyntaxError {
                        pos,
                        message: "missing exponent".into(),
                    })
                }
                _ => return Err(ParseError::NonIntegerExponent { pos }),
            };
            base = Expr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.next() {
            Token::Number(text) => {
                let value = Interval::from_decimal(&text).map_err(|e| ParseError::SyntaxError {
                    pos,
                    message: e.to_string(),
                })?;
                let nearest = text.parse().expect("from_decimal accepted the literal");
                Ok(Expr::Literal {
                    text,
                    nearest,
                    value,
                })
            }
            Token::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::Var(i));
                }
                match name.as_str() {
                    "pi" => return Ok(Expr::Named(NamedConstant::Pi)),
                    "e" => return Ok(Expr::Named(NamedConstant::E)),
                    _ => {}
                }
                match UnaryOp::from_name(&name) {
                    Some(op) => {
                        self.expect(Token::LParen)?;
                        let arg = self.expr()?;
                        self.expect(Token::RParen)?;
                        Ok(Expr::unary(op, arg))
                    }
                    None => Err(ParseError::UnknownIdentifier { name, pos }),
                }
            }
            Token::LParen => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            Token::End => Err(ParseError::SyntaxError {
                pos,
                message: "unexpected end of input".into(),
            }),
            other => Err(ParseError::SyntaxError {
                pos,
                message: format!("unexpected {other:?}"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Vec<String> {
        vec!["x".to_string()]
    }

    #[test]
    fn dangling_operator() {
        assert!(matches!(
            parse("x +", &x()),
            Err(ParseError::SyntaxError { pos: 3, .. })
        ));
        assert!(matches!(parse("", &x()), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(parse("(x", &x()), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(parse("x $ 2", &x()), Err(ParseError::SyntaxError { pos: 2, .. })));
    }

    #[test]
    fn unknown_names() {
        assert_eq!(
            parse("2*y", &x()),
            Err(ParseError::UnknownIdentifier {
                name: "y".into(),
                pos: 2
            })
        );
        assert!(matches!(parse("tan(x)", &x()), Err(ParseError::UnknownIdentifier { .. })));
    }

    #[test]
    fn exponents_must_be_integers() {
        assert_eq!(parse("x^2.5", &x()), Err(ParseError::NonIntegerExponent { pos: 2 }));
        assert_eq!(parse("x^-1", &x()), Err(ParseError::NonIntegerExponent { pos: 2 }));
        assert_eq!(parse("x^y", &x()), Err(ParseError::NonIntegerExponent { pos: 2 }));
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        let e = parse("-x^2", &x()).unwrap();
        assert_eq!(
            e,
            Expr::unary(UnaryOp::Neg, Expr::Pow(Box::new(Expr::Var(0)), 2))
        );
        assert_eq!(e.eval_point(&[3.0]).unwrap(), -9.0);
    }

    #[test]
    fn left_associative() {
        let e = parse("8 - 3 - 2", &x()).unwrap();
        assert_eq!(e.eval_point(&[0.0]).unwrap(), 3.0);
        let e = parse("8 / 4 / 2", &x()).unwrap();
        assert_eq!(e.eval_point(&[0.0]).unwrap(), 1.0);
        let e = parse("1 + 2 * 3", &x()).unwrap();
        assert_eq!(e.eval_point(&[0.0]).unwrap(), 7.0);
    }

    #[test]
    fn quartic_structure() {
        let e = parse("2 - 25*x + 108*x^2 - 162*x^3 + 81*x^4", &x()).unwrap();
        // ((((2 - 25x) + 108x^2) - 162x^3) + 81x^4)
        let Expr::Binary(BinaryOp::Add, lhs, last) = &e else {
            panic!("top node should be an addition: {e:?}");
        };
        assert_eq!(
            **last,
            Expr::binary(
                BinaryOp::Mul,
                Expr::constant(81.0).with_text("81"),
                Expr::Pow(Box::new(Expr::Var(0)), 4)
            )
        );
        assert!(matches!(**lhs, Expr::Binary(BinaryOp::Sub, _, _)));
    }

    #[test]
    fn seven_minima_function_parses() {
        let e = parse("abs(sin(6*pi*x))/(1+x^2) + 3*cos(2*pi*x)/10", &x()).unwrap();
        let v = e.eval_point(&[0.0]).unwrap();
        assert!((v - 0.3).abs() < 1e-15);
    }

    #[test]
    fn variables_shadow_constants() {
        let vars = vec!["e".to_string()];
        assert_eq!(parse("e", &vars).unwrap(), Expr::Var(0));
        assert_eq!(parse("e", &x()).unwrap(), Expr::Named(NamedConstant::E));
        assert_eq!(parse("atan(x)", &x()).unwrap(), parse("arctan(x)", &x()).unwrap());
    }

    #[test]
    fn scientific_literals() {
        let e = parse("1e-8 + 2.5E2", &x()).unwrap();
        assert_eq!(e.eval_point(&[0.0]).unwrap(), 1e-8 + 250.0);
    }
}
