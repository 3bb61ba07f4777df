use anyhow::{bail, Context, Result};
use dualhash::gf2::{BitVector, LinearCode};

/// A code given by name (`rep:N`, `even:N`, `full:N`, `zero:N`,
/// `span:BITS,BITS,...`) or as a path to a generator file.
pub fn parse_code(arg: &str) -> Result<LinearCode> {
    if let Some((name, rest)) = arg.split_once(':') {
        let size = || rest.parse::<usize>().with_context(|| format!("bad length in {arg:?}"));
        return Ok(match name {
            "rep" | "repetition" => LinearCode::repetition(size()?),
            "even" | "even-weight" => LinearCode::even_weight(size()?),
            "full" => LinearCode::full(size()?),
            "zero" => LinearCode::zero(size()?),
            "span" => {
                let rows: Vec<BitVector> = rest
                    .split(',')
                    .map(|r| r.trim().parse())
                    .collect::<Result<_, _>>()
                    .with_context(|| format!("bad generator rows in {arg:?}"))?;
                let n = rows.first().map(BitVector::len).unwrap_or(0);
                LinearCode::span(n, rows)?
            }
            _ => bail!("unknown code name {name:?} (use rep, even, full, zero or span)"),
        });
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading code file {arg}"))?;
    Ok(LinearCode::parse(&text)?)
}

/// Comma-separated list of lengths, e.g. `100,1000,10000`.
pub fn parse_list(arg: &str) -> Result<Vec<usize>> {
    arg.split(',')
        .map(|t| {
            let t = t.trim();
            // accept 1e5-style shorthands
            t.parse::<usize>()
                .or_else(|_| t.parse::<f64>().map(|f| f as usize))
                .with_context(|| format!("bad list entry {t:?}"))
        })
        .collect()
}
