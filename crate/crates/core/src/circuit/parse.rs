//! Line-oriented netlist reader.
//!
//! ```text
//! # comment
//! R <name> <n+> <n-> <ohms>
//! C <name> <n+> <n-> <farads>
//! I <name> <n+> <n-> <amps> [<imag>]
//! V <name> <n+> <n-> <volts> [<imag>]
//! ```
//!
//! Node `0` is ground. Other node labels are arbitrary tokens and are
//! numbered in order of first appearance.

use std::collections::HashMap;

use super::{CircuitError, CircuitNetlist, Incidence};
use crate::numkit::C64;

type Branch = (Option<usize>, Option<usize>);

pub fn parse_netlist(text: &str) -> Result<CircuitNetlist, CircuitError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut node = |label: &str| -> Option<usize> {
        if label == "0" {
            return None;
        }
        Some(*index.entry(label.to_string()).or_insert_with(|| {
            names.push(label.to_string());
            names.len() - 1
        }))
    };

    let (mut r_br, mut c_br, mut i_br, mut v_br): (Vec<Branch>, Vec<Branch>, Vec<Branch>, Vec<Branch>) =
        Default::default();
    let (mut g, mut c, mut i_src, mut v_src) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| CircuitError::Parse {
            line: line_no,
            message,
        };
        if tok.len() < 5 {
            return Err(err(format!("expected `<kind> <name> <n+> <n-> <value>`, got `{line}`")));
        }
        let number = |s: &str| -> Result<f64, CircuitError> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("invalid number `{s}`")))
        };
        let value = number(tok[4])?;
        let br = (node(tok[2]), node(tok[3]));
        if br.0.is_none() && br.1.is_none() {
            return Err(err(format!("element {} connects ground to ground", tok[1])));
        }
        let kind = tok[0].to_ascii_uppercase();
        match kind.as_str() {
            "R" | "C" => {
                if tok.len() != 5 {
                    return Err(err(format!("unexpected trailing fields after {}", tok[1])));
                }
                if value <= 0.0 {
                    return Err(err(format!("{} must be positive", tok[1])));
                }
                if kind == "R" {
                    r_br.push(br);
                    g.push(1.0 / value);
                } else {
                    c_br.push(br);
                    c.push(value);
                }
            }
            "I" | "V" => {
                let im = match tok.len() {
                    5 => 0.0,
                    6 => number(tok[5])?,
                    _ => return Err(err(format!("unexpected trailing fields after {}", tok[1]))),
                };
                if kind == "I" {
                    i_br.push(br);
                    i_src.push(C64::new(value, im));
                } else {
                    v_br.push(br);
                    v_src.push(C64::new(value, im));
                }
            }
            other => return Err(err(format!("unknown element kind `{other}`"))),
        }
    }

    let n = names.len();
    let net = CircuitNetlist {
        a_r: Incidence::from_branches(n, r_br),
        a_c: Incidence::from_branches(n, c_br),
        a_i: Incidence::from_branches(n, i_br),
        a_v: Incidence::from_branches(n, v_br),
        g,
        c,
        i_src,
        v_src,
        node_names: names,
    };
    net.check()?;
    Ok(net)
}
