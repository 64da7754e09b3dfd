//! The graph6 text format (header-less variant).
//!
//! Vertex count `n` is written as one byte `n + 63` for `n <= 62`, or as `~`
//! followed by three 6-bit groups for larger `n`. The upper triangle is then
//! packed column by column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) into 6-bit
//! big-endian groups, each offset by 63.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 0x3f) as u8 + 63);
        out.push(((n >> 6) & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

pub fn decode(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    let sextet = |offset: usize| -> Result<u8> {
        match bytes.get(offset) {
            None => Err(Error::Graph6Truncated { offset, expected: offset + 1 }),
            Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
            Some(&b) => Err(Error::Graph6BadChar { offset, byte: b }),
        }
    };

    let (n, mut pos) = match bytes.first() {
        None => return Err(Error::Graph6Truncated { offset: 0, expected: 1 }),
        Some(b'~') => {
            if bytes.get(1) == Some(&b'~') {
                // 36-bit form; anything encoded that way is over our limit.
                return Err(Error::TooManyVertices { n: 258048, limit: MAX_VERTICES });
            }
            let n = ((sextet(1)? as usize) << 12) | ((sextet(2)? as usize) << 6) | sextet(3)? as usize;
            (n, 4)
        }
        Some(_) => (sextet(0)? as usize, 1),
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { n, limit: MAX_VERTICES });
    }

    let nbits = n * n.saturating_sub(1) / 2;
    let expected = pos + nbits.div_ceil(6);
    if bytes.len() < expected {
        // report the first missing byte unless an earlier byte is malformed
        for off in pos..bytes.len() {
            sextet(off)?;
        }
        return Err(Error::Graph6Truncated { offset: bytes.len(), expected });
    }
    if bytes.len() > expected {
        return Err(Error::Graph6Trailing { offset: expected });
    }

    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit % 6 == 0 {
                cur = sextet(pos)?;
                pos += 1;
            }
            if cur >> (5 - bit % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
        }
    }
    Ok(g)
}
