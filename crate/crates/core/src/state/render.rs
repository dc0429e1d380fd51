//! `<cell> key |-> value ... </cell>` rendering.

use std::collections::BTreeMap;
use std::fmt::{Display, Write};

use thiserror::Error;

use super::config::Configuration;
use super::value::Location;
use crate::syntax::RefKind;

/// Cells accepted by [`render_cell`], in `print all` order.
pub const CELL_NAMES: [&str; 15] = [
    "k", "env", "genv", "fstack", "store", "typeEnv", "mutType", "nextLoc", "borrow", "ref",
    "refType", "moved", "out", "time", "code",
];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown cell `{0}` (cells: {cells})", cells = CELL_NAMES.join(", "))]
pub struct UnknownCell(pub String);

fn cell<I, K, V>(name: &str, entries: I) -> String
where
    I: IntoIterator<Item = (K, V)>,
    K: Display,
    V: Display,
{
    let mut s = format!("<{name}>");
    for (k, v) in entries {
        let _ = write!(s, " {k} |-> {v}");
    }
    let _ = write!(s, " </{name}>");
    s
}

/// Entries of a location-keyed map, hiding function and struct code.
fn data<'a, V: Display + 'a>(
    cfg: &'a Configuration,
    map: &'a BTreeMap<Location, V>,
) -> impl Iterator<Item = (Location, String)> + 'a {
    map.iter()
        .filter(|(l, _)| !cfg.is_code(**l))
        .map(|(l, v)| (*l, v.to_string()))
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn render_cell(cfg: &Configuration, name: &str) -> Result<String, UnknownCell> {
    Ok(match name {
        "k" => {
            let mut s = String::from("<k>");
            for (i, frame) in cfg.k.iter().rev().enumerate() {
                if i > 0 {
                    s.push_str(" ~>");
                }
                let _ = write!(s, " {frame}");
            }
            s.push_str(" </k>");
            s
        }
        "env" => cell(name, cfg.env.iter()),
        "genv" => cell(name, cfg.genv.iter()),
        "fstack" => {
            let mut s = String::from("<fstack>");
            for frame in &cfg.fstack {
                let _ = write!(s, " ({}, {})", frame.function, frame.return_type);
            }
            s.push_str(" </fstack>");
            s
        }
        "store" => cell(name, data(cfg, &cfg.store)),
        "typeEnv" => cell(name, data(cfg, &cfg.type_env)),
        "mutType" => cell(
            name,
            cfg.mut_type
                .iter()
                .filter(|(l, _)| !cfg.is_code(**l))
                .map(|(l, m)| (*l, flag(*m))),
        ),
        "nextLoc" => format!("<nextLoc> {} </nextLoc>", cfg.next_loc),
        "borrow" => cell(
            name,
            cfg.borrow
                .iter()
                .filter(|(l, _)| !cfg.is_code(**l))
                .map(|(l, b)| (*l, b.symbol())),
        ),
        "ref" => cell(name, cfg.ref_cell.iter()),
        "refType" => cell(
            name,
            cfg.ref_type
                .iter()
                .filter(|(l, _)| !cfg.is_code(**l))
                .map(|(l, k)| {
                    (
                        *l,
                        match k {
                            None => "⊥",
                            Some(RefKind::Shared) => "0",
                            Some(RefKind::Exclusive) => "1",
                        },
                    )
                }),
        ),
        "moved" => cell(
            name,
            cfg.moved
                .iter()
                .filter(|(l, _)| !cfg.is_code(**l))
                .map(|(l, m)| (*l, flag(*m))),
        ),
        "out" => format!("<out> {:?} </out>", cfg.out),
        "time" => cell(name, cfg.time.iter()),
        "code" => cell(
            name,
            cfg.store.iter().filter(|(l, _)| cfg.is_code(**l)),
        ),
        other => return Err(UnknownCell(other.to_string())),
    })
}

/// Every cell, one per line.
pub fn render_all(cfg: &Configuration) -> String {
    CELL_NAMES
        .iter()
        .map(|c| render_cell(cfg, c).expect("known cell"))
        .collect::<Vec<_>>()
        .join("\n")
}
