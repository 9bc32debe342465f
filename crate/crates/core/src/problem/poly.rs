//! Polynomial systems in a small text format, with exact differentiation.
//!
//! One component per line. A component is a sum of terms joined by `+`/`-`;
//! a term is a `*`-separated product of factors, each factor being a real
//! number, a complex pair `(re, im)`, or a variable `xK` with an optional
//! non-negative integer power `^N`. Variables are numbered from 1.
//! Whitespace is insignificant and `#` starts a comment. An optional first
//! line `vars = N` fixes the number of variables.
//!
//! ```text
//! vars = 2
//! 2*x1^2 - 1
//! (0, 1) * x1 * x2 + 3.5e-1
//! ```

use std::fmt;

use thiserror::Error;

use super::Problem;
use crate::frac::MonomialTerm;
use crate::numerics::{CMatrix, CVector, Complex};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: expected {}, found {found}", fmt_expected(.expected))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

fn fmt_expected(expected: &[&str]) -> String {
    match expected {
        [one] => one.to_string(),
        many => format!("one of {}", many.join(", ")),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: variable x{var} exceeds the declared {n_vars} variables")]
    Dimension { line: usize, var: usize, n_vars: usize },
    #[error("{0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSystem {
    components: Vec<Vec<MonomialTerm>>,
    n_vars: usize,
}

impl PolynomialSystem {
    /// Builds a system, merging like terms and dropping zero coefficients.
    pub fn new(components: Vec<Vec<MonomialTerm>>, n_vars: usize) -> Result<Self, PolyError> {
        if n_vars == 0 {
            return Err(PolyError::Shape("a system needs at least one variable".into()));
        }
        if components.is_empty() {
            return Err(PolyError::Shape("a system needs at least one component".into()));
        }
        for (i, comp) in components.iter().enumerate() {
            if let Some(t) = comp.iter().find(|t| t.exponents.len() != n_vars) {
                return Err(PolyError::Shape(format!(
                    "component {i}: term with {} exponents in a {n_vars}-variable system",
                    t.exponents.len()
                )));
            }
        }
        let components = components.into_iter().map(normalize).collect();
        Ok(Self { components, n_vars })
    }

    pub fn components(&self) -> &[Vec<MonomialTerm>] {
        &self.components
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_square(&self) -> bool {
        self.components.len() == self.n_vars
    }

    pub fn eval_component(&self, component: usize, point: &[Complex]) -> Complex {
        eval_terms(&self.components[component], point)
    }

    pub fn eval(&self, point: &[Complex]) -> Vec<Complex> {
        self.components.iter().map(|c| eval_terms(c, point)).collect()
    }
}

fn eval_terms(terms: &[MonomialTerm], point: &[Complex]) -> Complex {
    terms.iter().map(|t| t.eval(point)).sum()
}

fn normalize(terms: Vec<MonomialTerm>) -> Vec<MonomialTerm> {
    let mut out: Vec<MonomialTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.iter_mut().find(|o| o.exponents == t.exponents) {
            Some(o) => o.coeff += t.coeff,
            None => out.push(t),
        }
    }
    out.retain(|t| t.coeff != Complex::new(0.0, 0.0));
    out
}

/// Exact partial derivative of one component with respect to `var`.
pub fn symbolic_partial(sys: &PolynomialSystem, component: usize, var: usize) -> Result<Vec<MonomialTerm>, PolyError> {
    let terms = sys.components.get(component).ok_or_else(|| {
        PolyError::Shape(format!("component {component} out of range ({} components)", sys.components.len()))
    })?;
    if var >= sys.n_vars {
        return Err(PolyError::Shape(format!("variable {var} out of range ({} variables)", sys.n_vars)));
    }
    Ok(differentiate(terms, var))
}

fn differentiate(terms: &[MonomialTerm], var: usize) -> Vec<MonomialTerm> {
    terms
        .iter()
        .filter(|t| t.exponents[var] > 0)
        .map(|t| {
            let mut exponents = t.exponents.clone();
            exponents[var] -= 1;
            MonomialTerm::new(t.coeff * f64::from(t.exponents[var]), exponents)
        })
        .collect()
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vars = {}", self.n_vars)?;
        for comp in &self.components {
            writeln!(f)?;
            if comp.is_empty() {
                write!(f, "0")?;
            }
            for (i, t) in comp.iter().enumerate() {
                write_term(f, t, i == 0)?;
            }
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &MonomialTerm, first: bool) -> fmt::Result {
    let has_vars = t.exponents.iter().any(|&e| e > 0);
    if t.coeff.im == 0.0 {
        let (neg, mag) = (t.coeff.re < 0.0, t.coeff.re.abs());
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if mag != 1.0 || !has_vars {
            write!(f, "{mag:?}")?;
            if has_vars {
                write!(f, "*")?;
            }
        }
    } else {
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "({:?}, {:?})", t.coeff.re, t.coeff.im)?;
        if has_vars {
            write!(f, "*")?;
        }
    }
    let mut sep = "";
    for (k, &e) in t.exponents.iter().enumerate() {
        match e {
            0 => continue,
            1 => write!(f, "{sep}x{}", k + 1)?,
            _ => write!(f, "{sep}x{}^{e}", k + 1)?,
        }
        sep = "*";
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    Ident(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Var(k) => format!("variable x{k}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::End => "end of line".into(),
        }
    }
}

struct LineParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    max_var: usize,
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let col = i + 1;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, col));
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| ParseError {
                line,
                column: col,
                expected: vec!["number"],
                found: format!("'{s}'"),
            })?;
            toks.push((Tok::Num(v), col));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let var = s.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()).filter(|&k| k >= 1);
            match var {
                Some(k) => toks.push((Tok::Var(k), col)),
                None => toks.push((Tok::Ident(s), col)),
            }
        } else {
            return Err(ParseError { line, column: col, expected: vec!["term"], found: format!("'{ch}'") });
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(toks)
}

/// A term as parsed: coefficient and `(var, power)` factors with 1-based vars.
type RawTerm = (Complex, Vec<(usize, u32)>);

impl LineParser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (tok, col) = &self.toks[self.pos];
        ParseError { line: self.line, column: *col, expected, found: tok.describe() }
    }

    fn expect(&mut self, want: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn polynomial(&mut self) -> Result<Vec<RawTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        loop {
            let (coeff, vars) = self.term()?;
            terms.push((coeff * sign, vars));
            sign = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                Tok::End => return Ok(terms),
                _ => return Err(self.error(vec!["'+'", "'-'", "'*'", "end of line"])),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let mut coeff = Complex::new(1.0, 0.0);
        let mut vars = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Num(v) => {
                    self.bump();
                    coeff *= v;
                }
                Tok::LParen => {
                    self.bump();
                    let re = self.signed_number()?;
                    self.expect(Tok::Comma, "','")?;
                    let im = self.signed_number()?;
                    self.expect(Tok::RParen, "')'")?;
                    coeff *= Complex::new(re, im);
                }
                Tok::Var(k) => {
                    self.bump();
                    let mut power = 1;
                    if *self.peek() == Tok::Caret {
                        self.bump();
                        power = self.exponent()?;
                    }
                    self.max_var = self.max_var.max(k);
                    vars.push((k, power));
                }
                _ => return Err(self.error(vec!["number", "'('", "variable"])),
            }
            if *self.peek() == Tok::Star {
                self.bump();
            } else {
                return Ok((coeff, vars));
            }
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(sign * v)
            }
            _ => Err(self.error(vec!["number"])),
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 && v <= f64::from(u32::MAX) => {
                self.bump();
                Ok(v as u32)
            }
            _ => Err(self.error(vec!["non-negative integer exponent"])),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the text format described in the module docs.
pub fn parse_polynomial_system(text: &str) -> Result<PolynomialSystem, PolyError> {
    let mut declared: Option<usize> = None;
    let mut raw: Vec<(usize, Vec<RawTerm>)> = Vec::new();
    let mut max_var = 0;
    let mut seen_content = false;
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = strip_comment(full_line);
        if body.trim().is_empty() {
            continue;
        }
        let toks = lex(body, line_no)?;
        let mut p = LineParser { toks, pos: 0, line: line_no, max_var: 0 };
        if let Tok::Ident(name) = p.peek().clone() {
            if name == "vars" && !seen_content {
                p.bump();
                p.expect(Tok::Eq, "'='")?;
                let n = match p.bump() {
                    Tok::Num(v) if v.fract() == 0.0 && v >= 1.0 => v as usize,
                    _ => {
                        p.pos = p.pos.saturating_sub(1);
                        return Err(p.error(vec!["positive integer"]).into());
                    }
                };
                p.expect(Tok::End, "end of line")?;
                declared = Some(n);
                seen_content = true;
                continue;
            }
            return Err(p.error(vec!["number", "'('", "variable"]).into());
        }
        seen_content = true;
        let terms = p.polynomial()?;
        if let Some(n) = declared {
            if p.max_var > n {
                return Err(PolyError::Dimension { line: line_no, var: p.max_var, n_vars: n });
            }
        }
        max_var = max_var.max(p.max_var);
        raw.push((line_no, terms));
    }
    if raw.is_empty() {
        let line = text.lines().count().max(1);
        return Err(ParseError { line, column: 1, expected: vec!["polynomial"], found: "end of input".into() }.into());
    }
    let n_vars = declared.unwrap_or(max_var.max(1));
    let components = raw
        .into_iter()
        .map(|(_, terms)| {
            terms
                .into_iter()
                .map(|(coeff, vars)| {
                    let mut exponents = vec![0u32; n_vars];
                    for (k, e) in vars {
                        exponents[k - 1] += e;
                    }
                    MonomialTerm::new(coeff, exponents)
                })
                .collect()
        })
        .collect();
    PolynomialSystem::new(components, n_vars)
}

/// A problem whose gradient field is polynomial.
#[derive(Debug, Clone)]
pub struct PolynomialProblem {
    objective: Option<Vec<MonomialTerm>>,
    gradient: PolynomialSystem,
    jacobian: Vec<Vec<Vec<MonomialTerm>>>,
}

impl PolynomialProblem {
    /// Scalar objective given as a one-component system; the gradient and
    /// Hessian are differentiated exactly.
    pub fn from_objective(sys: &PolynomialSystem) -> Result<Self, PolyError> {
        if sys.components.len() != 1 {
            return Err(PolyError::Shape(format!(
                "an objective has one component, found {}",
                sys.components.len()
            )));
        }
        let f = sys.components[0].clone();
        let grads: Vec<_> = (0..sys.n_vars).map(|k| differentiate(&f, k)).collect();
        let gradient = PolynomialSystem::new(grads, sys.n_vars)?;
        let mut problem = Self::from_gradient_field(gradient)?;
        problem.objective = Some(f);
        Ok(problem)
    }

    /// A square system used directly as the gradient field; `value` is
    /// unavailable and the Hessian is the Jacobian of the system.
    pub fn from_gradient_field(sys: PolynomialSystem) -> Result<Self, PolyError> {
        if !sys.is_square() {
            return Err(PolyError::Shape(format!(
                "gradient field needs as many components as variables, found {} components in {} variables",
                sys.components.len(),
                sys.n_vars
            )));
        }
        let jacobian = sys
            .components
            .iter()
            .map(|c| (0..sys.n_vars).map(|k| differentiate(c, k)).collect())
            .collect();
        Ok(Self { objective: None, gradient: sys, jacobian })
    }
}

impl Problem for PolynomialProblem {
    fn dim(&self) -> usize {
        self.gradient.n_vars
    }

    fn value(&self, x: &[Complex]) -> Option<Complex> {
        self.objective.as_ref().map(|f| eval_terms(f, x))
    }

    fn gradient(&self, x: &[Complex]) -> CVector {
        CVector::new(self.gradient.eval(x)).expect("non-empty system")
    }

    fn hessian(&self, x: &[Complex]) -> CMatrix {
        let n = self.gradient.n_vars;
        let entries = self.jacobian.iter().flat_map(|row| row.iter().map(|t| eval_terms(t, x))).collect();
        CMatrix::new(n, n, entries).expect("square jacobian")
    }

    fn poly_form(&self) -> Option<&PolynomialSystem> {
        Some(&self.gradient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn term(re: f64, im: f64, e: &[u32]) -> MonomialTerm {
        MonomialTerm::new(c(re, im), e.to_vec())
    }

    #[test]
    fn parses_two_line_system() {
        let sys = parse_polynomial_system("2*x1^2 - 1\n3*x1*x2").unwrap();
        assert_eq!(sys.n_vars(), 2);
        assert_eq!(
            sys.components(),
            &[vec![term(2.0, 0.0, &[2, 0]), term(-1.0, 0.0, &[0, 0])], vec![term(3.0, 0.0, &[1, 1])]]
        );
    }

    #[test]
    fn dangling_operator_is_a_parse_error() {
        let err = parse_polynomial_system("x1^2 +").unwrap_err();
        match err {
            PolyError::Parse(e) => {
                assert_eq!((e.line, e.column), (1, 7));
                assert!(e.expected.contains(&"variable"));
                assert_eq!(e.found, "end of line");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn imaginary_coefficient() {
        let sys = parse_polynomial_system("(0,1)*x1").unwrap();
        assert_eq!(sys.components(), &[vec![term(0.0, 1.0, &[1])]]);
    }

    #[test]
    fn whitespace_signs_and_factor_order() {
        let sys = parse_polynomial_system("  - x2 ^ 3 * 2.5e-1 + ( -1 , +2 ) *x1 # trailing\n\n+7").unwrap();
        assert_eq!(sys.n_vars(), 2);
        assert_eq!(sys.components()[0], vec![term(-0.25, 0.0, &[0, 3]), term(-1.0, 2.0, &[1, 0])]);
        assert_eq!(sys.components()[1], vec![term(7.0, 0.0, &[0, 0])]);
    }

    #[test]
    fn like_terms_merge() {
        let sys = parse_polynomial_system("x1*x2 + 2*x2*x1 - x1^2*x1^0 + x1^2").unwrap();
        assert_eq!(sys.components(), &[vec![term(3.0, 0.0, &[1, 1])]]);
    }

    #[test]
    fn declared_dimension() {
        let sys = parse_polynomial_system("vars = 3\nx1").unwrap();
        assert_eq!(sys.n_vars(), 3);
        let err = parse_polynomial_system("vars = 2\nx1 + x3").unwrap_err();
        assert_eq!(err, PolyError::Dimension { line: 2, var: 3, n_vars: 2 });
    }

    #[test]
    fn error_positions() {
        let err = parse_polynomial_system("x1\nx1 ** x2").unwrap_err();
        assert!(matches!(err, PolyError::Parse(ParseError { line: 2, column: 5, .. })));
        let err = parse_polynomial_system("x1^1.5").unwrap_err();
        assert!(matches!(err, PolyError::Parse(ParseError { column: 4, .. })));
        let err = parse_polynomial_system("y + 1").unwrap_err();
        assert!(matches!(err, PolyError::Parse(ParseError { column: 1, .. })));
        let err = parse_polynomial_system("x0").unwrap_err();
        assert!(matches!(err, PolyError::Parse(_)));
        assert!(parse_polynomial_system("# nothing\n\n").is_err());
        assert!(parse_polynomial_system("x1 $ 2").is_err());
        assert!(parse_polynomial_system("(1, 2").is_err());
    }

    #[test]
    fn display_round_trip() {
        let text = "vars = 3\n-x1^2 + 0.5*x2 - 1.0\n(1.0, -2.0)*x1*x3 + 1e-7\n0";
        let sys = parse_polynomial_system(text).unwrap();
        assert_eq!(sys.to_string(), text);
        assert_eq!(parse_polynomial_system(&sys.to_string()).unwrap(), sys);
    }

    #[test]
    fn partial_examples() {
        let sys = parse_polynomial_system("2*x1^2\n3*x1*x2\n5").unwrap();
        assert_eq!(symbolic_partial(&sys, 0, 0).unwrap(), vec![term(4.0, 0.0, &[1, 0])]);
        assert_eq!(symbolic_partial(&sys, 1, 1).unwrap(), vec![term(3.0, 0.0, &[1, 0])]);
        assert_eq!(symbolic_partial(&sys, 2, 0).unwrap(), vec![]);
        assert!(symbolic_partial(&sys, 3, 0).is_err());
        assert!(symbolic_partial(&sys, 0, 2).is_err());
    }

    #[test]
    fn objective_problem() {
        // f = x1^2 x2 + x2^3 ; ∇f = (2 x1 x2, x1^2 + 3 x2^2) ; Hf = [[2x2, 2x1],[2x1, 6x2]]
        let sys = parse_polynomial_system("x1^2*x2 + x2^3").unwrap();
        let p = PolynomialProblem::from_objective(&sys).unwrap();
        let x = [c(1.0, 1.0), c(2.0, -0.5)];
        assert_eq!(p.value(&x).unwrap(), x[0] * x[0] * x[1] + x[1] * x[1] * x[1]);
        let g = p.gradient(&x);
        assert_eq!(g[0], x[0] * x[1] * 2.0);
        assert_eq!(g[1], x[0] * x[0] + x[1] * x[1] * 3.0);
        let h = p.hessian(&x);
        assert_eq!(h, CMatrix::new(2, 2, vec![x[1] * 2.0, x[0] * 2.0, x[0] * 2.0, x[1] * 6.0]).unwrap());
        assert!(PolynomialProblem::from_objective(&parse_polynomial_system("x1\nx2").unwrap()).is_err());
    }

    #[test]
    fn gradient_field_problem() {
        let sys = parse_polynomial_system("x1^2 - 1").unwrap();
        let p = PolynomialProblem::from_gradient_field(sys).unwrap();
        assert!(p.value(&[c(1.0, 0.0)]).is_none());
        assert_eq!(p.hessian(&[c(3.0, 0.0)])[(0, 0)], c(6.0, 0.0));
        assert!(PolynomialProblem::from_gradient_field(parse_polynomial_system("x1*x2").unwrap()).is_err());
    }
}
