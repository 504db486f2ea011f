//! Generators for test and benchmark strings, and the token file format.
//!
//! Token files hold one decimal token per whitespace-separated field; a raw
//! byte mode reads arbitrary files as byte-valued tokens.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Error;

/// First `k` symbols of the square-free ternary word over {0,1,2}: the gaps
/// between consecutive 0s of the bit-parity (Prouhet-Thue-Morse) sequence,
/// minus one.
pub fn ternary_thue_morse(k: usize) -> Result<Vec<u64>, Error> {
    if k == 0 {
        return Err(Error::param("k", "length must be at least 1"));
    }
    let mut out = Vec::with_capacity(k);
    let mut prev_zero = 0u64; // index 0 has even bit parity
    let mut i = 1u64;
    while out.len() < k {
        if i.count_ones() & 1 == 0 {
            out.push(i - prev_zero - 1);
            prev_zero = i;
        }
        i += 1;
    }
    Ok(out)
}

/// Uniform i.i.d. tokens in `[0, sigma)`, deterministic per seed.
pub fn random_string(n: usize, sigma: u64, seed: u64) -> Result<Vec<u64>, Error> {
    if sigma == 0 {
        return Err(Error::param("sigma", "alphabet size must be positive"));
    }
    if n == 0 {
        return Err(Error::param("n", "length must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| rng.gen_range(0..sigma)).collect())
}

pub fn unary(n: usize) -> Result<Vec<u64>, Error> {
    if n == 0 {
        return Err(Error::param("n", "length must be at least 1"));
    }
    Ok(vec![0; n])
}

/// 0,1,...,sigma-1 repeated, truncated to length `n`.
pub fn periodic(n: usize, sigma: u64) -> Result<Vec<u64>, Error> {
    if sigma == 0 {
        return Err(Error::param("sigma", "alphabet size must be positive"));
    }
    if n == 0 {
        return Err(Error::param("n", "length must be at least 1"));
    }
    Ok((0..n).map(|i| i as u64 % sigma).collect())
}

/// Prefix of the binary Fibonacci word 0100101001001...
pub fn fibonacci_word(n: usize) -> Result<Vec<u64>, Error> {
    if n == 0 {
        return Err(Error::param("n", "length must be at least 1"));
    }
    let mut prev: Vec<u64> = vec![0];
    let mut cur: Vec<u64> = vec![0, 1];
    while cur.len() < n {
        let next: Vec<u64> = cur.iter().chain(prev.iter()).copied().collect();
        prev = cur;
        cur = next;
    }
    cur.truncate(n);
    Ok(cur)
}

pub fn parse_tokens(text: &str) -> Result<Vec<u64>, Error> {
    let mut tokens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for field in line.split_whitespace() {
            let tok = field.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno + 1,
                reason: format!("bad token {field:?}: {e}"),
            })?;
            tokens.push(tok);
        }
    }
    if tokens.is_empty() {
        return Err(Error::Parse {
            line: 1,
            reason: "no tokens in input".to_string(),
        });
    }
    Ok(tokens)
}

pub fn read_tokens(path: impl AsRef<Path>) -> Result<Vec<u64>, Error> {
    parse_tokens(&fs::read_to_string(path)?)
}

pub fn write_tokens(path: impl AsRef<Path>, tokens: &[u64]) -> Result<(), Error> {
    fs::write(path, format_tokens(tokens))?;
    Ok(())
}

pub fn format_tokens(tokens: &[u64]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&t.to_string());
    }
    out.push('\n');
    out
}

/// Raw byte mode: every byte of the file is one token.
pub fn read_bytes_as_tokens(path: impl AsRef<Path>) -> Result<Vec<u64>, Error> {
    let bytes = fs::read(path)?;
    if bytes.is_empty() {
        return Err(Error::Parse {
            line: 1,
            reason: "empty file".to_string(),
        });
    }
    Ok(bytes.into_iter().map(u64::from).collect())
}
