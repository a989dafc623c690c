use serde::Serialize;

use super::{group_digest, hom_verdict, EngineConfig, KnotData, TavError};
use crate::homsearch::GroupHom;
use crate::knots::{wirtinger, EdgeOrigin, KnotError, KnotTable};
use crate::poly::{cyclotomic, ZPoly};
use crate::twisted::classical_alexander;

/// Input of the satellite rule for `K(α, J)` and `f: G(K(α, J)) → G`.
#[derive(Clone, Debug, Serialize)]
pub struct SatelliteSpec {
    /// Vanishing of the base polynomial for the induced `f_0`; `None` if
    /// not supplied.
    pub base_vanishing: Option<bool>,
    #[serde(serialize_with = "as_text")]
    pub companion_alexander: ZPoly,
    /// Order of the cyclic image of the companion group.
    pub d: u64,
    /// Linking number of `α` with the base knot.
    pub lk: i64,
    /// `f` factors through the collapse onto the base knot group.
    pub factors_through: bool,
    /// For `lk ≠ 0`: vanishing of the link and companion polynomials.
    pub link_verdicts: Option<(bool, bool)>,
}

fn as_text<S: serde::Serializer>(p: &ZPoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SatelliteRule {
    /// `lk = 0` and `f` does not factor through the base.
    NotFactoring,
    /// `Φ_d` divides `Δ_J`.
    CyclotomicRoot,
    BaseVanishing,
    /// Neither factor vanishes.
    Neither,
    LinkDisjunction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatelliteVerdict {
    pub vanishing: bool,
    pub rule: SatelliteRule,
}

pub fn satellite_vanishing(s: &SatelliteSpec) -> Result<SatelliteVerdict, TavError> {
    if s.d == 0 {
        return Err(TavError::BadQuery("cyclic image order must be positive".into()));
    }
    let v = |vanishing, rule| Ok(SatelliteVerdict { vanishing, rule });
    if s.lk != 0 {
        let (a, b) = s.link_verdicts.ok_or(TavError::MissingSubVerdict("link and companion"))?;
        return v(a || b, SatelliteRule::LinkDisjunction);
    }
    if !s.factors_through {
        return v(true, SatelliteRule::NotFactoring);
    }
    if !s.companion_alexander.is_zero() && s.companion_alexander.div_exact(&cyclotomic(s.d))?.is_some() {
        return v(true, SatelliteRule::CyclotomicRoot);
    }
    match s.base_vanishing.ok_or(TavError::MissingSubVerdict("base"))? {
        true => v(true, SatelliteRule::BaseVanishing),
        false => v(false, SatelliteRule::Neither),
    }
}

/// Builds the satellite spec of a table knot made by infection, for a
/// homomorphism given on its Wirtinger generators.
///
/// The companion group maps onto the subgroup generated by the loops
/// `f(x_b)⁻¹ f(x_a)` around the companion pushoff pairs; `f` factors
/// through the base exactly when these all coincide. The base verdict is
/// computed for the induced map on base arcs unless the base is fibered.
pub fn satellite_spec_for(table: &KnotTable, name: &str, f: &GroupHom, cfg: &EngineConfig) -> Result<SatelliteSpec, TavError> {
    let entry = table.get(name).ok_or_else(|| KnotError::UnknownKnot(name.into()))?;
    let recipe = entry.infect.as_ref().ok_or_else(|| TavError::BadQuery(format!("{name} is not built by infection")))?;
    let inf = table.infection(name)?;
    let (arc, arcs) = inf.pd.arcs();
    if f.images.len() != arcs {
        return Err(TavError::BadQuery(format!("{} images for {arcs} Wirtinger generators", f.images.len())));
    }
    let g = &f.target;
    let x = |label: u32| f.images[arc[label as usize - 1]];
    let loops: Vec<usize> = inf.companion_pairs.iter().map(|&(a, b)| g.mul(g.inv(x(b)), x(a))).collect();
    let factors_through = loops.windows(2).all(|w| w[0] == w[1]);
    let d = loops.first().map_or(1, |&u| g.element_order(u)) as u64;
    let companion = table.get(&recipe.companion).ok_or_else(|| KnotError::UnknownKnot(recipe.companion.clone()))?;
    let companion_alexander = classical_alexander(&companion.presentation())?;
    let base = table.get(&recipe.base).ok_or_else(|| KnotError::UnknownKnot(recipe.base.clone()))?;
    let base_vanishing = if !factors_through {
        None
    } else if base.fibered {
        Some(false)
    } else {
        let bp = wirtinger(&base.pd)?;
        let (barc, bcount) = base.pd.arcs();
        let mut images = vec![None; bcount];
        for (i, o) in inf.origin.iter().enumerate() {
            if let EdgeOrigin::Base(e) = *o {
                images[barc[e as usize - 1]].get_or_insert(x(i as u32 + 1));
            }
        }
        let images: Vec<usize> = images.into_iter().map(|i| i.unwrap_or(g.identity())).collect();
        let f0 = GroupHom::new(&bp, g.clone(), images)?;
        let bk = KnotData::new(base.name.clone(), bp, false)?;
        let v = hom_verdict(&bk, &f0, &group_digest(g), cfg)?;
        v.is_vanishing()
    };
    Ok(SatelliteSpec { base_vanishing, companion_alexander, d, lk: 0, factors_through, link_verdicts: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::bundled_table;

    fn spec(d: u64, lk: i64, factors_through: bool, base: Option<bool>) -> SatelliteSpec {
        SatelliteSpec {
            base_vanishing: base,
            companion_alexander: cyclotomic(15),
            d,
            lk,
            factors_through,
            link_verdicts: None,
        }
    }

    #[test]
    fn decision_tree() {
        let r = satellite_vanishing(&spec(15, 0, true, Some(false))).unwrap();
        assert_eq!(r, SatelliteVerdict { vanishing: true, rule: SatelliteRule::CyclotomicRoot });
        // Φ_15(-1) = 1
        assert_eq!(cyclotomic(15).eval(&num_bigint::BigInt::from(-1)), num_bigint::BigInt::from(1));
        let r = satellite_vanishing(&spec(2, 0, true, Some(false))).unwrap();
        assert_eq!(r, SatelliteVerdict { vanishing: false, rule: SatelliteRule::Neither });
        let r = satellite_vanishing(&spec(2, 0, true, Some(true))).unwrap();
        assert_eq!(r.rule, SatelliteRule::BaseVanishing);
        let r = satellite_vanishing(&spec(2, 0, false, None)).unwrap();
        assert_eq!(r, SatelliteVerdict { vanishing: true, rule: SatelliteRule::NotFactoring });
        assert_eq!(satellite_vanishing(&spec(2, 0, true, None)).unwrap_err(), TavError::MissingSubVerdict("base"));
        assert!(matches!(satellite_vanishing(&spec(2, 1, true, None)), Err(TavError::MissingSubVerdict(_))));
        let mut s = spec(2, 1, true, None);
        s.link_verdicts = Some((false, true));
        assert_eq!(satellite_vanishing(&s).unwrap().rule, SatelliteRule::LinkDisjunction);
        assert!(satellite_vanishing(&s).unwrap().vanishing);
        assert!(satellite_vanishing(&spec(0, 0, true, None)).is_err());
    }

    #[test]
    fn spec_from_a_small_infection() {
        use crate::groups::{construct_group, GroupSpec};
        use crate::homsearch::{enumerate_homs, EpiSearchConfig};
        let t = bundled_table();
        let p = t.get("4_1^3_1").unwrap().presentation();
        let d5 = construct_group(&GroupSpec::Dihedral(5)).unwrap();
        let homs = enumerate_homs(&p, &d5, &EpiSearchConfig::default()).unwrap().homs;
        assert_eq!(homs.len(), 2);
        for f in &homs {
            let s = satellite_spec_for(t, "4_1^3_1", f, &EngineConfig::default()).unwrap();
            assert!(s.factors_through);
            assert_eq!(s.d, 5);
            assert_eq!(s.base_vanishing, Some(false));
            assert!(!satellite_vanishing(&s).unwrap().vanishing);
        }
    }
}
