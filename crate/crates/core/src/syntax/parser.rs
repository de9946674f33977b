use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::formula::{desugar, Formula, Modality, Surface};
use crate::symbol::Symbol;

/// Options for [`parse_formula_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept `$`-prefixed placeholder set symbols (kit files only).
    pub placeholders: bool,
}

pub(crate) struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    opts: ParseOptions,
}

fn is_element_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_')
}

const KEYWORDS: [&str; 3] = ["true", "false", "eq"];

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [Spanned], opts: ParseOptions) -> Parser<'a> {
        Parser { toks, pos: 0, opts }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>, expected: &[&str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: msg.into(),
            expected: expected.iter().map(|e| e.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input", "`|`", "`&`", "`->`", "`<->`"]))
        }
    }

    fn quantifier_ahead(&self) -> Option<(bool, bool)> {
        let Tok::Ident(kw) = self.peek() else { return None };
        let (set, exists) = match kw.as_str() {
            "E" => (false, true),
            "A" => (false, false),
            "EX" => (true, true),
            "AX" => (true, false),
            _ => return None,
        };
        let var_ok = matches!(self.peek_at(1), Tok::Ident(_) | Tok::At | Tok::Placeholder(_));
        (var_ok && *self.peek_at(2) == Tok::Dot).then_some((set, exists))
    }

    pub(crate) fn formula(&mut self) -> Result<Surface, ParseError> {
        if let Some((set, exists)) = self.quantifier_ahead() {
            self.bump();
            let var = match self.bump() {
                Tok::At => Symbol::position(),
                Tok::Ident(name) | Tok::Placeholder(name) => {
                    if set {
                        if is_element_name(&name) {
                            self.pos -= 1;
                            return Err(self.error(format!("set variable `{name}` must be capitalized"), &[]));
                        }
                        self.check_placeholder(&name)?;
                        Symbol::set(&name)
                    } else {
                        if !is_element_name(&name) {
                            self.pos -= 1;
                            return Err(self.error(format!("element variable `{name}` must be lowercase"), &[]));
                        }
                        Symbol::element(&name)
                    }
                }
                _ => unreachable!("checked by quantifier_ahead"),
            };
            self.expect(Tok::Dot, "`.`")?;
            let body = Box::new(self.formula()?);
            return Ok(match (set, exists) {
                (false, true) => Surface::ExistsElem(var, body),
                (false, false) => Surface::ForallElem(var, body),
                (true, true) => Surface::ExistsSet(var, body),
                (true, false) => Surface::ForallSet(var, body),
            });
        }
        self.iff()
    }

    fn check_placeholder(&self, name: &str) -> Result<(), ParseError> {
        if name.starts_with('$') && !self.opts.placeholders {
            Err(self.error(format!("placeholder `{name}` is only allowed in kit files"), &[]))
        } else {
            Ok(())
        }
    }

    fn iff(&mut self) -> Result<Surface, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.rhs_of_binary(Parser::iff)?;
            return Ok(Surface::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Surface, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.rhs_of_binary(Parser::imp)?;
            return Ok(Surface::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    /// A quantifier may open the right operand of any binary connective.
    fn rhs_of_binary(&mut self, next: fn(&mut Self) -> Result<Surface, ParseError>) -> Result<Surface, ParseError> {
        if self.quantifier_ahead().is_some() {
            self.formula()
        } else {
            next(self)
        }
    }

    fn or(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.rhs_of_binary(Parser::and)?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.rhs_of_binary(Parser::unary)?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Surface, ParseError> {
        if self.quantifier_ahead().is_some() {
            return self.formula();
        }
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Surface::Not(Box::new(self.unary()?)))
            }
            Tok::Lt | Tok::LBrack => self.modal(),
            _ => self.atom(),
        }
    }

    fn modal(&mut self) -> Result<Surface, ParseError> {
        let is_box = self.bump() == Tok::LBrack;
        let close = if is_box { Tok::RBrack } else { Tok::Gt };
        let close_name = if is_box { "`]`" } else { "`>`" };
        enum M {
            Rel(String, bool),
            Global,
        }
        let m = match self.peek().clone() {
            Tok::Star => {
                self.bump();
                M::Global
            }
            Tok::Tilde => {
                self.bump();
                M::Rel(self.relation_name()?, true)
            }
            t if t == close => M::Rel("R".into(), false),
            _ => M::Rel(self.relation_name()?, false),
        };
        self.expect(close, close_name)?;
        let args = if *self.peek() == Tok::LParen {
            self.bump();
            let mut args = vec![self.formula()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.formula()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            args
        } else {
            vec![self.unary()?]
        };
        let modality = match m {
            M::Global => {
                if args.len() != 1 {
                    return Err(self.error("the global modality takes exactly one argument", &[]));
                }
                Modality::Global
            }
            M::Rel(name, inverse) => {
                let r = Symbol::relation(&name, args.len() as u32 + 1);
                if inverse {
                    Modality::Inv(r)
                } else {
                    Modality::Rel(r)
                }
            }
        };
        Ok(if is_box { Surface::Box(modality, args) } else { Surface::Diamond(modality, args) })
    }

    fn relation_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(format!("R{n}"))
            }
            Tok::Ident(s) if !is_element_name(&s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["relation name", "`*`", "`~`"])),
        }
    }

    fn element(&mut self) -> Result<Symbol, ParseError> {
        match self.peek().clone() {
            Tok::At => {
                self.bump();
                Ok(Symbol::position())
            }
            Tok::Ident(s) if is_element_name(&s) && !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Symbol::element(&s))
            }
            _ => Err(self.unexpected(&["element symbol"])),
        }
    }

    fn element_list(&mut self) -> Result<Vec<Symbol>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.element()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.element()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Surface, ParseError> {
        match self.peek().clone() {
            Tok::At => {
                self.bump();
                Ok(Surface::Nominal(Symbol::position()))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Surface::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Surface::False)
            }
            Tok::Ident(s) if s == "eq" && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                let args = self.element_list()?;
                match args.as_slice() {
                    [p, q] => Ok(Surface::Eq(p.clone(), q.clone())),
                    _ => Err(self.error("eq takes exactly two arguments", &[])),
                }
            }
            Tok::Ident(s) if is_element_name(&s) => {
                self.bump();
                Ok(Surface::Nominal(Symbol::element(&s)))
            }
            Tok::Ident(s) | Tok::Placeholder(s) => {
                self.check_placeholder(&s)?;
                self.bump();
                if *self.peek() == Tok::LParen {
                    let args = self.element_list()?;
                    if args.len() == 1 {
                        Ok(Surface::SetApp(Symbol::set(&s), args[0].clone()))
                    } else {
                        Ok(Surface::RelApp(Symbol::relation(&s, args.len() as u32), args))
                    }
                } else {
                    Ok(Surface::SetAtom(Symbol::set(&s)))
                }
            }
            _ => Err(self.unexpected(&["formula"])),
        }
    }
}

/// Parses surface syntax without desugaring.
pub fn parse_surface(text: &str, opts: ParseOptions) -> Result<Surface, ParseError> {
    let toks = lex(text, 1)?;
    let mut p = Parser::new(&toks, opts);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_formula_with(text: &str, opts: ParseOptions) -> Result<Formula, ParseError> {
    Ok(desugar(&parse_surface(text, opts)?))
}

/// Parses a formula and desugars it into core syntax.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, ParseOptions::default())
}
