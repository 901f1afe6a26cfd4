//! Tiny string grammars for `--space` and `--subgroup`.

use polar_core::catalog::SubgroupSpec;
use polar_core::symspace::SpaceFamily;

fn split_args(inner: &str) -> Vec<String> {
    // Split on top-level commas, respecting parentheses.
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn call<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

/// Parse a space string; a `noncompact:` prefix selects the dual model.
/// Grammar: sphere(n) | cp(n) | hp(n) | op2 | euclidean(n) |
/// product(space, space, ...).
pub fn parse_space(s: &str) -> anyhow::Result<(SpaceFamily, bool)> {
    let s = s.trim();
    let (s, compact) = match s.strip_prefix("noncompact:") {
        Some(rest) => (rest.trim(), false),
        None => (s, true),
    };
    Ok((parse_family(s)?, compact))
}

fn parse_family(s: &str) -> anyhow::Result<SpaceFamily> {
    let s = s.trim();
    if s == "op2" {
        return Ok(SpaceFamily::OctonionicPlane);
    }
    if let Some(inner) = call(s, "sphere") {
        return Ok(SpaceFamily::Sphere { n: inner.trim().parse()? });
    }
    if let Some(inner) = call(s, "cp") {
        return Ok(SpaceFamily::ComplexProjective { n: inner.trim().parse()? });
    }
    if let Some(inner) = call(s, "hp") {
        return Ok(SpaceFamily::QuaternionicProjective { n: inner.trim().parse()? });
    }
    if let Some(inner) = call(s, "euclidean") {
        return Ok(SpaceFamily::Euclidean { n: inner.trim().parse()? });
    }
    if let Some(inner) = call(s, "product") {
        let factors = split_args(inner)
            .iter()
            .map(|f| parse_family(f))
            .collect::<anyhow::Result<Vec<_>>>()?;
        if factors.len() < 2 {
            anyhow::bail!("product needs at least two factors");
        }
        return Ok(SpaceFamily::Product { factors });
    }
    anyhow::bail!("cannot parse space `{s}`")
}

/// Parse a subgroup string into a structured spec. The special names map to
/// the catalog's builders; `factors(a|b|...)` distributes specs over the
/// factors of a product space.
pub fn parse_subgroup(s: &str) -> anyhow::Result<SubgroupSpec> {
    let s = s.trim();
    match s {
        "full" | "full_isotropy" => return Ok(SubgroupSpec::FullIsotropy),
        "torus" => return Ok(SubgroupSpec::Torus),
        "diag" | "diag_so" => return Ok(SubgroupSpec::DiagSo),
        "irrep5" => return Ok(SubgroupSpec::So3Irrep5),
        "irrep5_circle" => return Ok(SubgroupSpec::So3Irrep5Circle),
        "spin(7)bare" | "spin7_bare" => return Ok(SubgroupSpec::Spin7Bare),
        "spin(9)" => return Ok(SubgroupSpec::FullIsotropy),
        _ => {}
    }
    if let Some(inner) = call(s, "so") {
        return Ok(SubgroupSpec::SoBlock { k: inner.trim().parse()? });
    }
    if let Some(inner) = call(s, "spin") {
        return Ok(SubgroupSpec::SpinSplit { k: inner.trim().parse()? });
    }
    if let Some(inner) = call(s, "u1") {
        let weights = split_args(inner)
            .iter()
            .map(|w| w.parse::<i64>().map_err(Into::into))
            .collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(SubgroupSpec::U1Weights { weights });
    }
    // "u(p)+u(q)" / "u(p)xu(q)"
    if let Some(rest) = s.strip_prefix("u(") {
        if let Some((p, _)) = rest.split_once(')') {
            if s.contains("+u(") || s.contains(")xu(") {
                return Ok(SubgroupSpec::UBlocks { p: p.trim().parse()? });
            }
        }
    }
    if s == "sp(1)^2" || s == "sp(1)^3" || s == "sp(1)^4" || s == "sp_blocks" {
        return Ok(SubgroupSpec::SpBlocks);
    }
    if let Some(inner) = call(s, "factors") {
        let parts = inner
            .split('|')
            .map(parse_subgroup)
            .collect::<anyhow::Result<Vec<_>>>()?;
        if parts.is_empty() {
            anyhow::bail!("factors(...) needs at least one part");
        }
        return Ok(SubgroupSpec::PerFactor { parts });
    }
    anyhow::bail!("cannot parse subgroup `{s}`")
}
