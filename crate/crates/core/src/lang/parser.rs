use std::collections::HashSet;

use crate::lang::lexer::{tokenize, Tok, Token};
use crate::lang::prefix::SWRLB;
use crate::lang::{Atom, InverseAxiom, LangError, PrefixTable, Rule};
use crate::term::{Fact, Iri, Literal, Term};

/// Which file format is being read; decides what terms are legal.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Rule,
    Fact,
    Pattern,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: PrefixTable,
}

impl Parser {
    fn new(text: &str, prefixes: &PrefixTable) -> Result<Self, LangError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
            prefixes: prefixes.clone(),
        })
    }

    /// Index of the next token that is not an id comment. Id comments only
    /// mean something at the top level of a rule file.
    fn lookahead(&self) -> usize {
        let mut i = self.pos;
        while matches!(self.tokens[i].tok, Tok::IdComment(_)) {
            i += 1;
        }
        i
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.lookahead()]
    }

    fn peek_raw(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        self.pos = self.lookahead();
        let token = self.tokens[self.pos].clone();
        if token.tok != Tok::Eof {
            self.pos += 1;
        }
        token
    }

    fn syntax(token: &Token, message: impl Into<String>) -> LangError {
        LangError::Syntax {
            line: token.line,
            col: token.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<Token, LangError> {
        let token = self.next();
        if token.tok == want {
            Ok(token)
        } else {
            Err(Self::syntax(
                &token,
                format!("expected {} {context}, found {}", want.describe(), token.tok.describe()),
            ))
        }
    }

    fn qname(&mut self, context: &str) -> Result<(Iri, Token), LangError> {
        let token = self.next();
        match &token.tok {
            Tok::Name(name) => {
                let iri = self
                    .prefixes
                    .resolve_qname(name)
                    .map_err(|e| e.at(token.line, token.col))?;
                if iri.local().is_empty() {
                    return Err(Self::syntax(&token, format!("`{name}` has an empty local name")));
                }
                Ok((iri, token))
            }
            other => Err(Self::syntax(&token, format!("expected {context}, found {}", other.describe()))),
        }
    }

    /// `@prefix p: <base> .` after the directive token has been consumed.
    fn prefix_decl(&mut self) -> Result<(), LangError> {
        let token = self.next();
        let prefix = match &token.tok {
            Tok::Name(name) if name.ends_with(':') && name.matches(':').count() == 1 => name.trim_end_matches(':').to_string(),
            other => return Err(Self::syntax(&token, format!("expected `prefix:` after @prefix, found {}", other.describe()))),
        };
        let iri_token = self.next();
        let Tok::IriRef(base) = &iri_token.tok else {
            return Err(Self::syntax(&iri_token, "expected `<base>` in @prefix declaration"));
        };
        self.prefixes
            .insert(&prefix, base)
            .map_err(|e| e.at(iri_token.line, iri_token.col))?;
        self.expect(Tok::Dot, "to end the @prefix declaration")?;
        Ok(())
    }

    fn term(&mut self, mode: Mode) -> Result<(Term, Token), LangError> {
        let token = self.next();
        let term = match &token.tok {
            Tok::Var(v) if mode == Mode::Fact => {
                return Err(LangError::Groundness {
                    line: token.line,
                    variable: v.clone(),
                })
            }
            Tok::Var(v) => Term::Variable(v.clone()),
            Tok::Name(name) => {
                let iri = self
                    .prefixes
                    .resolve_qname(name)
                    .map_err(|e| e.at(token.line, token.col))?;
                Term::Individual(iri)
            }
            Tok::Int(i) => Term::Literal(Literal::Integer(*i)),
            Tok::Str(s) => Term::Literal(Literal::String(s.clone())),
            other => return Err(Self::syntax(&token, format!("expected a term, found {}", other.describe()))),
        };
        Ok((term, token))
    }

    fn atom(&mut self, mode: Mode) -> Result<Atom, LangError> {
        let (predicate, head) = self.qname("an atom")?;
        self.expect(Tok::LParen, "after the atom name")?;
        let mut args = vec![self.term(mode)?];
        loop {
            let token = self.next();
            match &token.tok {
                Tok::Comma => args.push(self.term(mode)?),
                Tok::RParen => break,
                other => {
                    return Err(Self::syntax(
                        &token,
                        format!("expected `,` or `)` in argument list, found {}", other.describe()),
                    ))
                }
            }
        }
        if predicate.expansion().starts_with(SWRLB) {
            if mode == Mode::Fact {
                return Err(Self::syntax(&head, format!("built-in `{predicate}` cannot be asserted as a fact")));
            }
            if args.len() < 2 {
                return Err(Self::syntax(
                    &head,
                    format!("built-in `{predicate}` needs at least two arguments, found {}", args.len()),
                ));
            }
            return Ok(Atom::Builtin {
                builtin: predicate,
                args: args.into_iter().map(|(t, _)| t).collect(),
            });
        }
        let mut args = args.into_iter();
        match (args.next(), args.next(), args.next()) {
            (Some((arg, tok)), None, None) => {
                if matches!(arg, Term::Literal(_)) {
                    return Err(Self::syntax(&tok, format!("class atom `{predicate}` cannot take a literal argument")));
                }
                Ok(Atom::class(predicate, arg))
            }
            (Some((subject, tok)), Some((object, _)), None) => {
                if matches!(subject, Term::Literal(_)) {
                    return Err(Self::syntax(&tok, format!("property atom `{predicate}` cannot take a literal subject")));
                }
                Ok(Atom::property(predicate, subject, object))
            }
            _ => Err(Self::syntax(
                &head,
                format!("atom `{predicate}` must have one (class) or two (property) arguments"),
            )),
        }
    }

    fn conjunction(&mut self) -> Result<Vec<Atom>, LangError> {
        let mut atoms = vec![self.atom(Mode::Rule)?];
        while self.peek().tok == Tok::Caret {
            self.next();
            atoms.push(self.atom(Mode::Rule)?);
        }
        Ok(atoms)
    }

    fn unexpected(token: &Token, what: &str) -> LangError {
        Self::syntax(token, format!("expected {what}, found {}", token.tok.describe()))
    }
}

/// Parses a rule file. Rules come back in file order; ids are taken from a
/// preceding `# id: <name>` comment or assigned as `rule<ordinal>`.
pub fn parse_rules(text: &str, prefixes: &PrefixTable) -> Result<Vec<Rule>, LangError> {
    let mut p = Parser::new(text, prefixes)?;
    let mut rules = Vec::new();
    let mut ids = HashSet::new();
    let mut pending_id: Option<String> = None;
    loop {
        let token = p.peek_raw().clone();
        match &token.tok {
            Tok::Eof => break,
            Tok::IdComment(id) => {
                pending_id = Some(id.clone());
                p.pos += 1;
            }
            Tok::Directive(d) if d == "prefix" => {
                p.pos += 1;
                p.prefix_decl()?;
            }
            Tok::Name(_) => {
                let id = pending_id.take().unwrap_or_else(|| format!("rule{}", rules.len() + 1));
                let antecedent = p.conjunction()?;
                p.expect(Tok::Arrow, "between antecedent and consequent")?;
                let consequent = p.conjunction()?;
                if p.peek().tok == Tok::Dot {
                    p.next();
                }
                if !ids.insert(id.clone()) {
                    return Err(LangError::DuplicateRuleId(id).at(token.line, token.col));
                }
                let rule = Rule::new(id, antecedent, consequent).map_err(|e| e.at(token.line, token.col))?;
                rules.push(rule);
            }
            _ => return Err(Parser::unexpected(&token, "a rule or @prefix declaration")),
        }
    }
    Ok(rules)
}

/// Parses a ground fact file, keeping the line each fact starts on.
pub fn parse_fact_lines(text: &str, prefixes: &PrefixTable) -> Result<Vec<(usize, Fact)>, LangError> {
    let mut p = Parser::new(text, prefixes)?;
    let mut facts = Vec::new();
    loop {
        let token = p.peek().clone();
        match &token.tok {
            Tok::Eof => break,
            Tok::Directive(d) if d == "prefix" => {
                p.next();
                p.prefix_decl()?;
            }
            Tok::Name(_) => {
                let atom = p.atom(Mode::Fact)?;
                p.expect(Tok::Dot, "after a fact")?;
                let fact = atom
                    .instantiate(&Default::default())
                    .ok_or_else(|| Parser::syntax(&token, format!("`{atom}` is not a ground fact")))?;
                facts.push((token.line, fact));
            }
            _ => return Err(Parser::unexpected(&token, "a fact or @prefix declaration")),
        }
    }
    Ok(facts)
}

pub fn parse_facts(text: &str, prefixes: &PrefixTable) -> Result<Vec<Fact>, LangError> {
    Ok(parse_fact_lines(text, prefixes)?.into_iter().map(|(_, f)| f).collect())
}

/// Parses an axiom file of `@inverse <p> <q> .` lines.
pub fn parse_axioms(text: &str, prefixes: &PrefixTable) -> Result<Vec<InverseAxiom>, LangError> {
    let mut p = Parser::new(text, prefixes)?;
    let mut axioms = Vec::new();
    loop {
        let token = p.next();
        match &token.tok {
            Tok::Eof => break,
            Tok::Directive(d) if d == "prefix" => p.prefix_decl()?,
            Tok::Directive(d) if d == "inverse" => {
                let (property, _) = p.qname("a property name")?;
                let (inverse, _) = p.qname("a property name")?;
                p.expect(Tok::Dot, "to end the @inverse axiom")?;
                let axiom = InverseAxiom::new(property, inverse).map_err(|e| match e {
                    LangError::SelfInverse { property, .. } => LangError::SelfInverse {
                        property,
                        line: Some(token.line),
                    },
                    e => e,
                })?;
                axioms.push(axiom);
            }
            _ => return Err(Parser::unexpected(&token, "`@inverse` or `@prefix`")),
        }
    }
    Ok(axioms)
}

/// Parses a single atom that may contain variables, e.g. a query pattern.
/// A trailing `.` is accepted.
pub fn parse_atom(text: &str, prefixes: &PrefixTable) -> Result<Atom, LangError> {
    let mut p = Parser::new(text, prefixes)?;
    let atom = p.atom(Mode::Pattern)?;
    if p.peek().tok == Tok::Dot {
        p.next();
    }
    let token = p.next();
    if token.tok != Tok::Eof {
        return Err(Parser::unexpected(&token, "end of pattern"));
    }
    Ok(atom)
}
