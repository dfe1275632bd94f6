use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geodata::{distance3, normalize_address, AddressLibrary, Network3D};
use crate::network::routing::{indoor_outdoor_route, RouteResult};
use crate::scalar::{total_cmp, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct GeocodeMatch<T> {
    pub record_id: String,
    /// In [0, 1]; exactly 1 only for an exact normalized match.
    pub score: f64,
    pub location: [T; 3],
}

fn jaccard(a: &[String], b: &[String]) -> f64 {
    let a: BTreeSet<&str> = a.iter().map(String::as_str).collect();
    let b: BTreeSet<&str> = b.iter().map(String::as_str).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Similarity of two normalized token sequences: half token-set Jaccard,
/// half normalized Levenshtein similarity of the space-joined strings.
pub fn address_score(query: &[String], record: &[String]) -> f64 {
    let (q, r) = (query.join(" "), record.join(" "));
    if q == r {
        return 1.0;
    }
    0.5 * jaccard(query, record) + 0.5 * strsim::normalized_levenshtein(&q, &r)
}

/// Top-`k` library records for `query`, by descending score then ascending
/// record id. Records scoring 0 are not returned.
pub fn geocode<T: Real>(library: &AddressLibrary<T>, query: &str, k: usize) -> Result<Vec<GeocodeMatch<T>>> {
    let tokens = normalize_address(query);
    if tokens.is_empty() {
        return Err(Error::EmptyQuery);
    }
    if library.is_empty() {
        return Err(Error::Empty("address library has no records"));
    }
    if k == 0 {
        return Err(Error::Parameter("number of matches must be positive".into()));
    }
    let mut matches: Vec<GeocodeMatch<T>> = library
        .records()
        .iter()
        .map(|rec| GeocodeMatch {
            record_id: rec.id.clone(),
            score: address_score(&tokens, &rec.tokens),
            location: rec.location(),
        })
        .filter(|m| m.score > 0.0)
        .collect();
    matches.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.record_id.cmp(&b.record_id)));
    matches.truncate(k);
    Ok(matches)
}

/// Nearest node to `location` by 3D distance, ties to the smaller id.
pub fn snap_to_node<T: Real>(net: &Network3D<T>, location: [T; 3]) -> Result<usize> {
    (0..net.node_count())
        .min_by(|&a, &b| {
            total_cmp(
                distance3(net.node(a).position(), location),
                distance3(net.node(b).position(), location),
            )
            .then_with(|| net.node(a).id.cmp(&net.node(b).id))
        })
        .ok_or(Error::Empty("network has no nodes"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AddressRoute<T> {
    pub from: GeocodeMatch<T>,
    pub to: GeocodeMatch<T>,
    pub from_node: String,
    pub to_node: String,
    pub route: RouteResult<T>,
}

/// Geocodes both addresses, snaps each best match to the network and routes
/// between the snapped nodes.
pub fn route_between_addresses<T: Real>(
    net: &Network3D<T>,
    library: &AddressLibrary<T>,
    from_addr: &str,
    to_addr: &str,
) -> Result<AddressRoute<T>> {
    let top = |q: &str| -> Result<GeocodeMatch<T>> {
        geocode(library, q, 1)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::GeocodeFailure(q.to_string()))
    };
    let from = top(from_addr)?;
    let to = top(to_addr)?;
    let a = net.node(snap_to_node(net, from.location)?).id.clone();
    let b = net.node(snap_to_node(net, to.location)?).id.clone();
    let route = indoor_outdoor_route(net, &a, &b)?;
    Ok(AddressRoute {
        from,
        to,
        from_node: a,
        to_node: b,
        route,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn library() -> AddressLibrary<f64> {
        AddressLibrary::from_csv(
            "id,address,x,y,z\n\
             A1,12 Fuhua Road,0,0,0\n\
             A2,88 Shennan Avenue,10,0,0\n\
             A3,5 Binhe Street,0,10,0\n",
        )
        .unwrap()
    }

    #[test]
    fn exact_match_scores_one() {
        let m = geocode(&library(), "12 FUHUA road.", 3).unwrap();
        assert_eq!(m[0].record_id, "A1");
        assert_eq!(m[0].score, 1.0);
        assert!(m[1..].iter().all(|x| x.score < 1.0));
    }

    #[test]
    fn transposed_characters_still_match() {
        let m = geocode(&library(), "88 Shennan Aveune", 3).unwrap();
        assert_eq!(m[0].record_id, "A2");
        assert!(m[0].score < 1.0);
    }

    #[test]
    fn empty_query() {
        assert!(matches!(geocode(&library(), "   ", 3), Err(Error::EmptyQuery)));
    }

    #[test]
    fn ordering_breaks_ties_by_id() {
        let lib = AddressLibrary::<f64>::from_csv("id,address,x,y,z\nB,main st,0,0,0\nA,main st,1,1,0\n").unwrap();
        let m = geocode(&lib, "main st", 5).unwrap();
        assert_eq!(m.iter().map(|x| x.record_id.as_str()).collect::<Vec<_>>(), ["A", "B"]);
    }

    #[test]
    fn zero_score_is_a_geocode_failure() {
        let net = Network3D::<f64>::from_json(
            r#"{"nodes":[{"id":"N","x":0,"y":0,"z":0,"layer":"outdoor"}],"edges":[]}"#,
        )
        .unwrap();
        let lib = AddressLibrary::<f64>::from_csv("id,address,x,y,z\nA,abc,0,0,0\n").unwrap();
        let err = route_between_addresses(&net, &lib, "abc", "zzz").unwrap_err();
        assert!(err.to_string().contains("geocode failure"), "{err}");
        let ok = route_between_addresses(&net, &lib, "abc", "abc").unwrap();
        assert_eq!(ok.route.total_length, 0.0);
    }
}
