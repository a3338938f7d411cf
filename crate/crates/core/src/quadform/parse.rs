//! Line-oriented surface-spec grammar.
//!
//! ```text
//! # comment
//! d=3 n=2
//! Q1 = x1^2
//! Q2 = x2^2 + x1*x3
//! Q1 = [[1,0],[0,1]]            # matrix body, symmetrized if needed
//! meta case=2a lambda=[2] w1=1 theta=0
//! ```
//! Coefficients are integers or rationals `a/b`; powers are `^1`/`^2`; every
//! term of a polynomial body must have total degree 2.

use super::spec::{CaseTag, StructuralMeta, SurfaceSpec};
use super::{QuadTuple, SymMatrix};
use crate::error::{CoreError, Result};
use crate::matrix::RatMatrix;
use crate::rational::{parse_rat, rint, Rat};

pub fn parse_surface(text: &str) -> Result<SurfaceSpec> {
    let mut d: Option<usize> = None;
    let mut n: Option<usize> = None;
    let mut forms: Vec<Option<SymMatrix>> = Vec::new();
    let mut meta: Option<StructuralMeta> = None;
    let mut symmetrized = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let lno = lineno + 1;
        if line.starts_with("d=") || line.starts_with("d =") {
            let (pd, pn) = parse_header(line, lno)?;
            d = Some(pd);
            n = Some(pn);
            forms = vec![None; pn];
        } else if line.starts_with('Q') || line.starts_with('q') {
            let (dd, nn) = match (d, n) {
                (Some(dd), Some(nn)) => (dd, nn),
                _ => return Err(perr(lno, 1, "component before the `d=.. n=..` header")),
            };
            let (idx, body) = split_component(line, lno)?;
            if idx < 1 || idx > nn {
                return Err(perr(lno, 1, &format!("component index Q{idx} outside 1..={nn}")));
            }
            let trimmed = body.trim_start();
            let col = line.len() - trimmed.len() + 1;
            let form = if trimmed.starts_with('[') {
                let (m, was_sym) = parse_matrix_body(trimmed, dd, lno, col)?;
                if !was_sym {
                    symmetrized = true;
                }
                m
            } else {
                parse_poly_body(trimmed, dd, lno, col)?
            };
            forms[idx - 1] = Some(form);
        } else if let Some(rest) = line.strip_prefix("meta") {
            meta = Some(parse_meta(rest.trim(), lno)?);
        } else {
            return Err(perr(lno, 1, &format!("unrecognized statement: {line}")));
        }
    }

    let d = d.ok_or_else(|| perr(0, 0, "missing `d=.. n=..` header"))?;
    let n = n.unwrap();
    if n != forms.len() {
        return Err(perr(0, 0, "internal: component count mismatch"));
    }
    let mut built = Vec::with_capacity(n);
    for (j, f) in forms.into_iter().enumerate() {
        built.push(f.ok_or_else(|| perr(0, 0, &format!("component Q{} not defined", j + 1)))?);
    }
    let tuple = QuadTuple::new(d, built)?;
    SurfaceSpec::new(tuple, meta, symmetrized)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn perr(line: usize, col: usize, msg: &str) -> CoreError {
    CoreError::Parse { line, col, msg: msg.to_string() }
}

fn parse_header(line: &str, lno: usize) -> Result<(usize, usize)> {
    // tolerate `d=3 n=2` with optional spaces around '='
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix("d=")
        .ok_or_else(|| perr(lno, 1, "header must start with d=<int>"))?;
    let npos = rest.find("n=").ok_or_else(|| perr(lno, 1, "header must contain n=<int>"))?;
    let d: usize = rest[..npos]
        .parse()
        .map_err(|_| perr(lno, 3, "d must be a positive integer"))?;
    let n: usize = rest[npos + 2..]
        .parse()
        .map_err(|_| perr(lno, npos + 3, "n must be a positive integer"))?;
    if d == 0 || n == 0 {
        return Err(perr(lno, 1, "d and n must be >= 1"));
    }
    Ok((d, n))
}

fn split_component(line: &str, lno: usize) -> Result<(usize, &str)> {
    let eq = line.find('=').ok_or_else(|| perr(lno, 1, "component must contain `=`"))?;
    let head = line[..eq].trim();
    let idx: usize = head[1..]
        .trim()
        .parse()
        .map_err(|_| perr(lno, 2, "component name must be Q<int>"))?;
    Ok((idx, &line[eq + 1..]))
}

fn parse_matrix_body(body: &str, d: usize, lno: usize, col0: usize) -> Result<(SymMatrix, bool)> {
    let body = body.trim();
    if !body.starts_with("[[") || !body.ends_with("]]") {
        return Err(perr(lno, col0, "matrix body must look like [[a,b],[c,d]]"));
    }
    let inner = &body[2..body.len() - 2];
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != d {
        return Err(perr(lno, col0, &format!("matrix must have {d} rows")));
    }
    let mut m = RatMatrix::zeros(d, d);
    for (i, row) in rows.iter().enumerate() {
        let entries: Vec<&str> = row.split(',').collect();
        if entries.len() != d {
            return Err(perr(lno, col0, &format!("matrix row {} must have {d} entries", i + 1)));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = parse_rat(e)
                .ok_or_else(|| perr(lno, col0, &format!("bad matrix entry `{}`", e.trim())))?;
        }
    }
    Ok(SymMatrix::symmetrize(m))
}

fn parse_poly_body(body: &str, d: usize, lno: usize, col0: usize) -> Result<SymMatrix> {
    let mut form = SymMatrix::zeros(d);
    let mut lex = Lexer::new(body, lno, col0);
    let mut sign = rint(1);
    let mut first = true;
    loop {
        lex.skip_ws();
        if lex.done() {
            if first {
                return Err(lex.error("empty polynomial body"));
            }
            break;
        }
        if !first {
            match lex.peek() {
                Some('+') => {
                    lex.bump();
                    sign = rint(1);
                }
                Some('-') => {
                    lex.bump();
                    sign = rint(-1);
                }
                _ => return Err(lex.error("expected `+` or `-` between terms")),
            }
        } else {
            match lex.peek() {
                Some('+') => {
                    lex.bump();
                }
                Some('-') => {
                    lex.bump();
                    sign = rint(-1);
                }
                _ => {}
            }
        }
        let term = parse_term(&mut lex, d)?;
        let coeff = &sign * &term.coeff;
        if term.zero_literal {
            // an explicit 0 term contributes nothing
        } else {
            form.add_monomial(term.i, term.j, &coeff);
        }
        sign = rint(1);
        first = false;
    }
    Ok(form)
}

struct Term {
    coeff: Rat,
    i: usize,
    j: usize,
    zero_literal: bool,
}

fn parse_term(lex: &mut Lexer, d: usize) -> Result<Term> {
    lex.skip_ws();
    let mut coeff = rint(1);
    let mut have_coeff = false;
    if matches!(lex.peek(), Some(c) if c.is_ascii_digit()) {
        coeff = lex.number()?;
        have_coeff = true;
        lex.skip_ws();
        if lex.peek() == Some('*') {
            lex.bump();
            lex.skip_ws();
        }
    }
    // collect factors x<i>[^e]
    let mut degrees: Vec<usize> = Vec::new();
    loop {
        lex.skip_ws();
        match lex.peek() {
            Some('x') | Some('X') => {
                lex.bump();
                let idx = lex.integer()? as usize;
                if idx < 1 || idx > d {
                    return Err(lex.error(&format!("variable x{idx} outside 1..={d}")));
                }
                let mut exp = 1u32;
                if lex.peek() == Some('^') {
                    lex.bump();
                    exp = lex.integer()? as u32;
                }
                for _ in 0..exp {
                    degrees.push(idx - 1);
                }
                lex.skip_ws();
                if lex.peek() == Some('*') {
                    lex.bump();
                    continue;
                }
                break;
            }
            _ => break,
        }
    }
    if degrees.is_empty() {
        if have_coeff && coeff == Rat::from_integer(0.into()) {
            return Ok(Term { coeff, i: 0, j: 0, zero_literal: true });
        }
        if have_coeff {
            return Err(lex.error("constant terms are not allowed in a quadratic form"));
        }
        return Err(lex.error("expected a term"));
    }
    if degrees.len() != 2 {
        return Err(lex.error(&format!(
            "every term must have total degree 2 (got degree {})",
            degrees.len()
        )));
    }
    let (i, j) = (degrees[0].min(degrees[1]), degrees[0].max(degrees[1]));
    Ok(Term { coeff, i, j, zero_literal: false })
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line, col0, _src: src }
    }

    fn done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, msg: &str) -> CoreError {
        CoreError::Parse { line: self.line, col: self.col0 + self.pos, msg: msg.to_string() }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("integer out of range"))
    }

    fn number(&mut self) -> Result<Rat> {
        let num = self.integer()?;
        if self.peek() == Some('/') {
            self.bump();
            let den = self.integer()?;
            if den == 0 {
                return Err(self.error("zero denominator"));
            }
            return Ok(crate::rational::rat(num, den));
        }
        Ok(rint(num))
    }
}

fn parse_meta(rest: &str, lno: usize) -> Result<StructuralMeta> {
    let mut case: Option<CaseTag> = None;
    let mut lambda: Vec<usize> = Vec::new();
    let mut w1 = None;
    let mut theta = None;
    let mut k = None;
    let mut eta = None;
    for tok in rest.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| perr(lno, 1, &format!("meta entries look like key=value, got `{tok}`")))?;
        match key {
            "case" => {
                case = Some(
                    CaseTag::parse(val)
                        .ok_or_else(|| perr(lno, 1, &format!("unknown case tag `{val}`")))?,
                );
            }
            "lambda" => {
                let inner = val
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| perr(lno, 1, "lambda must look like [1,2,...]"))?;
                if !inner.trim().is_empty() {
                    for item in inner.split(',') {
                        let v: usize = item
                            .trim()
                            .parse()
                            .map_err(|_| perr(lno, 1, &format!("bad lambda entry `{item}`")))?;
                        lambda.push(v);
                    }
                }
            }
            "w1" => w1 = Some(parse_usize(val, lno, "w1")?),
            "theta" => theta = Some(parse_usize(val, lno, "theta")?),
            "k" => k = Some(parse_usize(val, lno, "k")?),
            "eta" => eta = Some(parse_usize(val, lno, "eta")?),
            other => return Err(perr(lno, 1, &format!("unknown meta key `{other}`"))),
        }
    }
    let case = case.ok_or_else(|| perr(lno, 1, "meta requires case=<tag>"))?;
    Ok(StructuralMeta { case, lambda, w1, theta, k, eta })
}

fn parse_usize(val: &str, lno: usize, name: &str) -> Result<usize> {
    val.parse().map_err(|_| perr(lno, 1, &format!("{name} must be a nonnegative integer")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rzero};

    #[test]
    fn parses_the_degenerate_surface() {
        let s = parse_surface("d=3 n=2\nQ1 = x1^2\nQ2 = x2^2 + x1*x3\n").unwrap();
        let q = &s.tuple;
        assert_eq!((q.d(), q.n()), (3, 2));
        assert_eq!(q.form(0).entry(0, 0), &rint(1));
        assert_eq!(q.form(1).entry(1, 1), &rint(1));
        assert_eq!(q.form(1).entry(0, 2), &rat(1, 2));
        assert_eq!(q.form(1).entry(2, 0), &rat(1, 2));
        assert!(!s.symmetrized);
    }

    #[test]
    fn parses_the_four_cycle() {
        let s = parse_surface(
            "d=4 n=4\nQ1=x1*x2\nQ2=x2*x3\nQ3=x3*x4\nQ4=x4*x1\n",
        )
        .unwrap();
        assert_eq!((s.tuple.d(), s.tuple.n()), (4, 4));
        assert_eq!(s.tuple.form(3).entry(0, 3), &rat(1, 2));
    }

    #[test]
    fn accumulates_duplicate_monomials() {
        let s = parse_surface("d=2 n=1\nQ1 = x1*x2 + x2*x1\n").unwrap();
        // x1*x2 + x2*x1 = 2 x1 x2, matrix entry 1
        assert_eq!(s.tuple.form(0).entry(0, 1), &rint(1));
    }

    #[test]
    fn rational_coefficients_and_signs() {
        let s = parse_surface("d=2 n=1\nQ1 = 1/2*x1^2 - 3*x1*x2 + x2^2\n").unwrap();
        let f = s.tuple.form(0);
        assert_eq!(f.entry(0, 0), &rat(1, 2));
        assert_eq!(f.entry(0, 1), &rat(-3, 2));
        assert_eq!(f.entry(1, 1), &rint(1));
    }

    #[test]
    fn matrix_body_symmetrizes_with_warning() {
        let s = parse_surface("d=2 n=1\nQ1 = [[0,1],[0,0]]\n").unwrap();
        assert!(s.symmetrized);
        assert_eq!(s.tuple.form(0).entry(0, 1), &rat(1, 2));
        let s2 = parse_surface("d=2 n=1\nQ1 = [[1,0],[0,1]]\n").unwrap();
        assert!(!s2.symmetrized);
    }

    #[test]
    fn syntax_errors_report_position() {
        let e = parse_surface("d=3 n=2\nQ1 = x1^3\nQ2 = x2^2\n").unwrap_err();
        match e {
            CoreError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_surface("d=2 n=1\nQ1 = x5^2\n").is_err());
        assert!(parse_surface("Q1 = x1^2\n").is_err());
        assert!(parse_surface("d=2 n=2\nQ1 = x1^2\n").is_err());
    }

    #[test]
    fn meta_parses_and_validates() {
        let ok = parse_surface(
            "d=2 n=2\nQ1 = x1^2\nQ2 = x1*x2\nmeta case=1 lambda=[1,1]\n",
        );
        assert!(ok.is_ok());
        let bad = parse_surface(
            "d=2 n=2\nQ1 = x1^2\nQ2 = x1*x2\nmeta case=1 lambda=[2,1]\n",
        );
        match bad.unwrap_err() {
            CoreError::MetaInconsistent { .. } => {}
            other => panic!("expected meta inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn canonical_text_roundtrips() {
        let text = "d=2 n=2\nQ1 = x1^2\nQ2 = x2^2\nmeta case=2a lambda=[2] w1=1\n";
        let s = parse_surface(text).unwrap();
        let canon = s.canonical_text();
        let s2 = parse_surface(&canon).unwrap();
        assert_eq!(s.tuple, s2.tuple);
        assert_eq!(s.meta, s2.meta);
        assert_eq!(canon, s2.canonical_text());
    }

    #[test]
    fn zero_form_allowed_via_literal() {
        let s = parse_surface("d=2 n=2\nQ1 = 0\nQ2 = x1^2\n").unwrap();
        assert!(s.tuple.form(0).is_zero());
        assert_eq!(s.tuple.evaluate(&[rint(2), rzero()]).unwrap(), vec![rzero(), rint(4)]);
    }
}
