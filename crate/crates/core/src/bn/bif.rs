//! Parser for the discrete subset of the Bayesian Interchange Format.
//!
//! Accepted: `network` blocks (contents ignored), `variable` blocks with a
//! `type discrete [ k ] { s1, … }` declaration, and `probability` blocks
//! whose entries are `table …;` (parentless nodes), `(s1, …) p1, …;` rows,
//! or a `default …;` row. `property` statements are skipped. Rows whose sum
//! is within [`ROW_RENORMALISE_TOL`] of 1 are rescaled to sum to 1; the
//! published benchmark files round probabilities to four digits.

use std::collections::HashMap;

use super::{BnError, DiscreteBn};
use crate::graph::Dag;

/// Largest row-sum deviation that is silently renormalised.
pub const ROW_RENORMALISE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn perr(line: usize, message: impl Into<String>) -> BnError {
    BnError::Parse {
        line,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, BnError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '/' => {
                chars.next();
                match chars.peek() {
                    Some('/') => {
                        for c in chars.by_ref() {
                            if c == '\n' {
                                line += 1;
                                break;
                            }
                        }
                    }
                    Some('*') => {
                        chars.next();
                        let start = line;
                        let mut prev = ' ';
                        let mut closed = false;
                        for c in chars.by_ref() {
                            if c == '\n' {
                                line += 1;
                            }
                            if prev == '*' && c == '/' {
                                closed = true;
                                break;
                            }
                            prev = c;
                        }
                        if !closed {
                            return Err(perr(start, "unterminated comment"));
                        }
                    }
                    _ => return Err(perr(line, "unexpected '/'")),
                }
            }
            '"' => {
                chars.next();
                let start = line;
                let mut s = String::new();
                let mut closed = false;
                for c in chars.by_ref() {
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    if c == '\n' {
                        line += 1;
                    }
                    s.push(c);
                }
                if !closed {
                    return Err(perr(start, "unterminated string"));
                }
                toks.push((Tok::Word(s), start));
            }
            '{' | '}' | '(' | ')' | '[' | ']' | ',' | ';' | '|' => {
                toks.push((Tok::Punct(c), line));
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "{}()[],;|\"".contains(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                toks.push((Tok::Word(s), line));
            }
        }
    }
    Ok(toks)
}

impl Lexer {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Result<(Tok, usize), BnError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| perr(self.line(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn word(&mut self) -> Result<(String, usize), BnError> {
        match self.next()? {
            (Tok::Word(w), l) => Ok((w, l)),
            (Tok::Punct(c), l) => Err(perr(l, format!("expected a name, found '{c}'"))),
        }
    }

    fn expect(&mut self, want: char) -> Result<usize, BnError> {
        match self.next()? {
            (Tok::Punct(c), l) if c == want => Ok(l),
            (Tok::Punct(c), l) => Err(perr(l, format!("expected '{want}', found '{c}'"))),
            (Tok::Word(w), l) => Err(perr(l, format!("expected '{want}', found '{w}'"))),
        }
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(&Tok::Punct(want)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_statement(&mut self) -> Result<(), BnError> {
        loop {
            if let (Tok::Punct(';'), _) = self.next()? {
                return Ok(());
            }
        }
    }

    fn skip_block(&mut self) -> Result<(), BnError> {
        self.expect('{')?;
        let mut depth = 1;
        while depth > 0 {
            match self.next()?.0 {
                Tok::Punct('{') => depth += 1,
                Tok::Punct('}') => depth -= 1,
                _ => {}
            }
        }
        Ok(())
    }

    /// Names separated by commas up to (not including) one of `stops`.
    fn name_list(&mut self, stops: &[char]) -> Result<Vec<(String, usize)>, BnError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Punct(c)) if stops.contains(c) => return Ok(out),
                Some(Tok::Punct(',')) => {
                    self.pos += 1;
                }
                _ => out.push(self.word()?),
            }
        }
    }

    /// Numbers separated by commas or whitespace, terminated by ';'.
    fn numbers(&mut self) -> Result<Vec<f64>, BnError> {
        let mut out = Vec::new();
        loop {
            match self.next()? {
                (Tok::Punct(';'), _) => return Ok(out),
                (Tok::Punct(','), _) => {}
                (Tok::Word(w), l) => out.push(
                    w.parse()
                        .map_err(|_| perr(l, format!("'{w}' is not a probability")))?,
                ),
                (Tok::Punct(c), l) => {
                    return Err(perr(l, format!("unexpected '{c}' in probability list")))
                }
            }
        }
    }
}

struct Variable {
    name: String,
    states: Vec<String>,
    line: usize,
}

enum RowKey {
    Config(Vec<(String, usize)>),
    Table,
    Default,
}

struct ProbBlock {
    child: (String, usize),
    parents: Vec<(String, usize)>,
    rows: Vec<(RowKey, Vec<f64>, usize)>,
}

fn parse_variable(lx: &mut Lexer) -> Result<Variable, BnError> {
    let (name, line) = lx.word()?;
    lx.expect('{')?;
    let mut states = None;
    loop {
        match lx.next()? {
            (Tok::Punct('}'), _) => break,
            (Tok::Word(w), l) if w == "type" => {
                let (kind, kl) = lx.word()?;
                if kind != "discrete" {
                    return Err(perr(kl, format!("variable '{name}': only discrete variables are supported, found '{kind}'")));
                }
                lx.expect('[')?;
                let (k, kl) = lx.word()?;
                let k: usize = k
                    .parse()
                    .map_err(|_| perr(kl, format!("invalid state count '{k}'")))?;
                lx.expect(']')?;
                lx.expect('{')?;
                let s: Vec<String> = lx.name_list(&['}'])?.into_iter().map(|(s, _)| s).collect();
                lx.expect('}')?;
                lx.eat(';');
                if s.len() != k {
                    return Err(perr(
                        l,
                        format!(
                            "variable '{name}' declares {k} states but lists {}",
                            s.len()
                        ),
                    ));
                }
                states = Some(s);
            }
            (Tok::Word(w), _) if w == "property" => lx.skip_statement()?,
            (Tok::Word(w), l) => {
                return Err(perr(l, format!("unexpected '{w}' in variable block")))
            }
            (Tok::Punct(c), l) => {
                return Err(perr(l, format!("unexpected '{c}' in variable block")))
            }
        }
    }
    let states =
        states.ok_or_else(|| perr(line, format!("variable '{name}' has no type declaration")))?;
    Ok(Variable { name, states, line })
}

fn parse_probability(lx: &mut Lexer) -> Result<ProbBlock, BnError> {
    lx.expect('(')?;
    let mut names = lx.name_list(&['|', ')'])?;
    let mut parents = if lx.eat('|') {
        lx.name_list(&[')'])?
    } else {
        Vec::new()
    };
    lx.expect(')')?;
    if names.is_empty() {
        return Err(perr(lx.line(), "probability block without a variable"));
    }
    let child = names.remove(0);
    // old-style "probability ( child, p1, p2 )"
    if parents.is_empty() {
        parents = names;
    } else if !names.is_empty() {
        return Err(perr(child.1, "more than one variable before '|'"));
    }
    lx.expect('{')?;
    let mut rows = Vec::new();
    loop {
        match lx.next()? {
            (Tok::Punct('}'), _) => break,
            (Tok::Punct('('), l) => {
                let cfg = lx.name_list(&[')'])?;
                lx.expect(')')?;
                rows.push((RowKey::Config(cfg), lx.numbers()?, l));
            }
            (Tok::Word(w), l) if w == "table" => rows.push((RowKey::Table, lx.numbers()?, l)),
            (Tok::Word(w), l) if w == "default" => rows.push((RowKey::Default, lx.numbers()?, l)),
            (Tok::Word(w), _) if w == "property" => lx.skip_statement()?,
            (Tok::Word(w), l) => {
                return Err(perr(l, format!("unexpected '{w}' in probability block")))
            }
            (Tok::Punct(c), l) => {
                return Err(perr(l, format!("unexpected '{c}' in probability block")))
            }
        }
    }
    Ok(ProbBlock {
        child,
        parents,
        rows,
    })
}

fn normalised(row: &[f64], node: &str, what: &str) -> Result<Vec<f64>, BnError> {
    if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(BnError::Validation(format!(
            "node '{node}': row {what} has a negative or non-finite entry"
        )));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_RENORMALISE_TOL {
        return Err(BnError::Validation(format!(
            "node '{node}': row {what} sums to {sum}"
        )));
    }
    Ok(row.iter().map(|p| p / sum).collect())
}

/// Parses a discrete network in BIF.
pub fn parse_discrete_network(text: &str) -> Result<DiscreteBn, BnError> {
    let mut lx = Lexer {
        toks: lex(text)?,
        pos: 0,
    };
    let mut net_name = String::from("unknown");
    let mut vars: Vec<Variable> = Vec::new();
    let mut blocks: Vec<ProbBlock> = Vec::new();
    while lx.peek().is_some() {
        let (kw, line) = lx.word()?;
        match kw.as_str() {
            "network" => {
                if let Some(Tok::Word(_)) = lx.peek() {
                    net_name = lx.word()?.0;
                }
                lx.skip_block()?;
            }
            "variable" => vars.push(parse_variable(&mut lx)?),
            "probability" => blocks.push(parse_probability(&mut lx)?),
            other => return Err(perr(line, format!("unexpected '{other}' at top level"))),
        }
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        if index.insert(v.name.as_str(), i).is_some() {
            return Err(perr(
                v.line,
                format!("variable '{}' declared twice", v.name),
            ));
        }
    }
    let lookup = |(name, line): &(String, usize)| {
        index
            .get(name.as_str())
            .copied()
            .ok_or_else(|| perr(*line, format!("unknown variable '{name}'")))
    };

    let mut block_of: Vec<Option<usize>> = vec![None; vars.len()];
    let mut edges = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let c = lookup(&block.child)?;
        if block_of[c].replace(b).is_some() {
            return Err(perr(
                block.child.1,
                format!("second probability block for '{}'", block.child.0),
            ));
        }
        for p in &block.parents {
            edges.push((lookup(p)?, c));
        }
    }
    if let Some(v) = block_of.iter().position(Option::is_none) {
        return Err(BnError::Validation(format!(
            "variable '{}' has no probability block",
            vars[v].name
        )));
    }
    let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let graph = Dag::new(names, edges)?;

    let mut tables = Vec::with_capacity(vars.len());
    for (v, var) in vars.iter().enumerate() {
        let block = &blocks[block_of[v].expect("checked above")];
        let card = var.states.len();
        let sorted_parents = graph.parents(v);
        let header: Vec<usize> = block.parents.iter().map(lookup).collect::<Result<_, _>>()?;
        let cards: Vec<usize> = sorted_parents
            .iter()
            .map(|&p| vars[p].states.len())
            .collect();
        let n_rows: usize = cards.iter().product();
        let mut table: Vec<Option<Vec<f64>>> = vec![None; n_rows];
        let mut default: Option<Vec<f64>> = None;
        for (key, values, line) in &block.rows {
            let check_len = |values: &[f64]| {
                if values.len() == card {
                    Ok(())
                } else {
                    Err(BnError::Validation(format!(
                        "node '{}' (line {line}): row has {} entries, cardinality is {card}",
                        var.name,
                        values.len()
                    )))
                }
            };
            match key {
                RowKey::Table => {
                    if !header.is_empty() {
                        return Err(perr(
                            *line,
                            format!(
                                "'table' form for '{}' with parents is not supported",
                                var.name
                            ),
                        ));
                    }
                    check_len(values)?;
                    table[0] = Some(normalised(values, &var.name, "()")?);
                }
                RowKey::Default => {
                    check_len(values)?;
                    default = Some(normalised(values, &var.name, "default")?);
                }
                RowKey::Config(cfg) => {
                    if cfg.len() != header.len() {
                        return Err(perr(
                            *line,
                            format!(
                                "'{}': row names {} parent states, expected {}",
                                var.name,
                                cfg.len(),
                                header.len()
                            ),
                        ));
                    }
                    check_len(values)?;
                    let mut by_node = HashMap::new();
                    for ((state, sl), &p) in cfg.iter().zip(&header) {
                        let s =
                            vars[p]
                                .states
                                .iter()
                                .position(|x| x == state)
                                .ok_or_else(|| {
                                    perr(
                                        *sl,
                                        format!("'{state}' is not a state of '{}'", vars[p].name),
                                    )
                                })?;
                        by_node.insert(p, s);
                    }
                    let row = sorted_parents
                        .iter()
                        .zip(&cards)
                        .fold(0, |acc, (p, &c)| acc * c + by_node[p]);
                    let label = format!(
                        "({})",
                        cfg.iter()
                            .map(|c| c.0.as_str())
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    if table[row]
                        .replace(normalised(values, &var.name, &label)?)
                        .is_some()
                    {
                        return Err(perr(
                            *line,
                            format!("duplicate row {label} for '{}'", var.name),
                        ));
                    }
                }
            }
        }
        let mut flat = Vec::with_capacity(n_rows * card);
        for (j, row) in table.into_iter().enumerate() {
            let row = row.or_else(|| default.clone()).ok_or_else(|| {
                BnError::Validation(format!(
                    "node '{}': missing row for parent configuration {j}",
                    var.name
                ))
            })?;
            flat.extend(row);
        }
        tables.push(flat);
    }
    let states = vars.into_iter().map(|v| v.states).collect();
    DiscreteBn::new(net_name, graph, states, tables)
}
