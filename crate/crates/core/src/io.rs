//! Tab-separated input formats.
//!
//! * triples: `subject<TAB>predicate<TAB>object`
//! * entity types: `entity<TAB>class[<TAB>class...]`
//! * constraints: `relation<TAB>dom1,dom2<TAB>rng1,rng2`
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::graph::{ConstraintDeclaration, TypeAssignment, Vocabulary};
use crate::{Error, Result};

/// A relation label with its declared domain and range classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRecord {
    pub relation: String,
    pub domain_classes: Vec<String>,
    pub range_classes: Vec<String>,
}

fn records<'a, R: BufRead + 'a>(reader: R, source: &'a str) -> impl Iterator<Item = Result<(usize, String)>> + 'a {
    reader
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| match line {
            Err(e) => Some(Err(Error::Parse {
                source_name: source.to_owned(),
                line: i + 1,
                message: e.to_string(),
            })),
            Ok(l) => {
                let l = l.trim_end_matches('\r');
                if l.trim().is_empty() || l.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, l.to_owned())))
                }
            }
        })
}

fn parse_error(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_owned(),
        line,
        message: message.into(),
    }
}

pub fn read_triples<R: BufRead>(reader: R, source: &str) -> Result<Vec<[String; 3]>> {
    records(reader, source)
        .map(|rec| {
            let (line, text) = rec?;
            let fields: Vec<&str> = text.split('\t').collect();
            match fields.as_slice() {
                [s, p, o] if !s.is_empty() && !p.is_empty() && !o.is_empty() => {
                    Ok([s.to_string(), p.to_string(), o.to_string()])
                }
                [_, _, _] => Err(parse_error(source, line, "empty field")),
                _ => Err(parse_error(
                    source,
                    line,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                )),
            }
        })
        .collect()
}

pub fn read_types<R: BufRead>(reader: R, source: &str) -> Result<Vec<(String, Vec<String>)>> {
    records(reader, source)
        .map(|rec| {
            let (line, text) = rec?;
            let mut fields = text.split('\t');
            let entity = fields.next().unwrap_or_default();
            let classes: Vec<String> = fields.filter(|c| !c.is_empty()).map(str::to_owned).collect();
            if entity.is_empty() || classes.is_empty() {
                return Err(parse_error(source, line, "expected an entity followed by at least one class"));
            }
            Ok((entity.to_owned(), classes))
        })
        .collect()
}

fn class_list(field: &str) -> Vec<String> {
    field
        .split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(str::to_owned)
        .collect()
}

pub fn read_constraints<R: BufRead>(reader: R, source: &str) -> Result<Vec<ConstraintRecord>> {
    records(reader, source)
        .map(|rec| {
            let (line, text) = rec?;
            let fields: Vec<&str> = text.split('\t').collect();
            let [relation, domain, range] = fields.as_slice() else {
                return Err(parse_error(
                    source,
                    line,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ));
            };
            if relation.is_empty() {
                return Err(parse_error(source, line, "empty relation label"));
            }
            Ok(ConstraintRecord {
                relation: relation.to_string(),
                domain_classes: class_list(domain),
                range_classes: class_list(range),
            })
        })
        .collect()
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })
}

pub fn read_triples_file(path: &Path) -> Result<Vec<[String; 3]>> {
    read_triples(open(path)?, &path.display().to_string())
}

pub fn read_types_file(path: &Path) -> Result<Vec<(String, Vec<String>)>> {
    read_types(open(path)?, &path.display().to_string())
}

pub fn read_constraints_file(path: &Path) -> Result<Vec<ConstraintRecord>> {
    read_constraints(open(path)?, &path.display().to_string())
}

/// Maps type records onto vocabulary ids; entities absent from the
/// vocabulary are skipped.
pub fn type_assignment(vocab: &Vocabulary, records: &[(String, Vec<String>)]) -> TypeAssignment {
    let mut types = TypeAssignment::new(vocab.num_entities());
    let mut unknown = 0;
    for (entity, classes) in records {
        match vocab.entity_id(entity) {
            Some(id) => classes.iter().for_each(|c| types.assign(id, c.clone())),
            None => unknown += 1,
        }
    }
    if unknown > 0 {
        log::warn!("{unknown} typed entities do not occur in any triple and were ignored");
    }
    types
}

/// Maps constraint records onto relation ids; unknown relations are skipped.
pub fn constraint_declarations(vocab: &Vocabulary, records: &[ConstraintRecord]) -> Vec<ConstraintDeclaration> {
    records
        .iter()
        .filter_map(|r| match vocab.relation_id(&r.relation) {
            Some(relation) => Some(ConstraintDeclaration {
                relation,
                domain_classes: r.domain_classes.clone(),
                range_classes: r.range_classes.clone(),
            }),
            None => {
                log::warn!("constraint for unknown relation {:?} ignored", r.relation);
                None
            }
        })
        .collect()
}

pub fn write_triples<W: Write>(mut w: W, triples: &[[String; 3]]) -> std::io::Result<()> {
    for [s, p, o] in triples {
        writeln!(w, "{s}\t{p}\t{o}")?;
    }
    Ok(())
}

pub fn write_types<W: Write>(mut w: W, types: &[(String, Vec<String>)]) -> std::io::Result<()> {
    for (entity, classes) in types {
        writeln!(w, "{entity}\t{}", classes.join("\t"))?;
    }
    Ok(())
}

pub fn write_constraints<W: Write>(mut w: W, records: &[ConstraintRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(
            w,
            "{}\t{}\t{}",
            r.relation,
            r.domain_classes.join(","),
            r.range_classes.join(",")
        )?;
    }
    Ok(())
}
