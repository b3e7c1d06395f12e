use std::collections::BTreeMap;

use crate::interval::Graph;

/// Name of the graph edge relation.
pub const EDGE: &str = "edge";

const BITS_LIMIT: usize = 4096;

/// Binary relation on `0..n` with adjacency lists both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    bits: Option<Vec<u64>>,
}

impl Relation {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (a, b) in pairs {
            out[a].push(b as u32);
            inn[b].push(a as u32);
        }
        for l in out.iter_mut().chain(inn.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        let bits = (n <= BITS_LIMIT).then(|| {
            let words = n.div_ceil(64);
            let mut bits = vec![0u64; n * words];
            for (a, l) in out.iter().enumerate() {
                for &b in l {
                    bits[a * words + b as usize / 64] |= 1 << (b % 64);
                }
            }
            bits
        });
        Relation { n, out, inn, bits }
    }

    #[inline]
    pub fn holds(&self, a: usize, b: usize) -> bool {
        match &self.bits {
            Some(bits) => {
                let words = self.n.div_ceil(64);
                bits[a * words + b / 64] >> (b % 64) & 1 == 1
            }
            None => self.out[a].binary_search(&(b as u32)).is_ok(),
        }
    }

    pub fn out(&self, a: usize) -> &[u32] {
        &self.out[a]
    }

    pub fn inn(&self, b: usize) -> &[u32] {
        &self.inn[b]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(a, l)| l.iter().map(move |&b| (a, b as usize)))
    }

    pub fn len(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Finite structure: a domain with named binary relations and unary labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelStructure {
    pub domain: Vec<String>,
    relations: BTreeMap<String, Relation>,
    labels: BTreeMap<String, Vec<bool>>,
}

impl RelStructure {
    pub fn new(domain: Vec<String>) -> Self {
        RelStructure { domain, relations: BTreeMap::new(), labels: BTreeMap::new() }
    }

    pub fn with_size(n: usize) -> Self {
        RelStructure::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut s = RelStructure::new(g.ids().to_vec());
        let pairs = g.edges().into_iter().flat_map(|(a, b)| [(a, b), (b, a)]);
        s.add_relation(EDGE, pairs);
        s
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn add_relation(&mut self, name: &str, pairs: impl IntoIterator<Item = (usize, usize)>) {
        let r = Relation::new(self.len(), pairs);
        self.relations.insert(name.to_string(), r);
    }

    pub fn add_label(&mut self, name: &str, members: impl IntoIterator<Item = usize>) {
        let mut v = vec![false; self.len()];
        for m in members {
            v[m] = true;
        }
        self.labels.insert(name.to_string(), v);
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &String> {
        self.relations.keys()
    }

    pub fn label(&self, name: &str) -> Option<&[bool]> {
        self.labels.get(name).map(Vec::as_slice)
    }

    pub fn label_names(&self) -> impl Iterator<Item = &String> {
        self.labels.keys()
    }

    /// Labels carried by an element, in name order.
    pub fn labels_of(&self, e: usize) -> Vec<&str> {
        self.labels.iter().filter(|(_, v)| v[e]).map(|(k, _)| k.as_str()).collect()
    }

    pub fn edge_graph(&self) -> Graph {
        let pairs = self
            .relation(EDGE)
            .map(|r| r.pairs().filter(|(a, b)| a < b).collect::<Vec<_>>())
            .unwrap_or_default();
        Graph::from_edges(self.domain.clone(), pairs)
    }

    /// Substructure on `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> RelStructure {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &k) in keep.iter().enumerate() {
            pos[k] = i;
        }
        let mut s = RelStructure::new(keep.iter().map(|&k| self.domain[k].clone()).collect());
        for (name, r) in &self.relations {
            let pairs: Vec<(usize, usize)> = r
                .pairs()
                .filter(|(a, b)| pos[*a] != usize::MAX && pos[*b] != usize::MAX)
                .map(|(a, b)| (pos[a], pos[b]))
                .collect();
            s.add_relation(name, pairs);
        }
        for (name, v) in &self.labels {
            s.add_label(name, keep.iter().enumerate().filter(|(_, &k)| v[k]).map(|(i, _)| i));
        }
        s
    }

    /// Text form: `domain a b c`, `rel name a b`, `label name a`.
    pub fn to_text(&self) -> String {
        let mut s = format!("domain {}\n", self.domain.join(" "));
        for (name, r) in &self.relations {
            for (a, b) in r.pairs() {
                s.push_str(&format!("rel {name} {} {}\n", self.domain[a], self.domain[b]));
            }
        }
        for (name, v) in &self.labels {
            for (i, _) in v.iter().enumerate().filter(|(_, b)| **b) {
                s.push_str(&format!("label {name} {}\n", self.domain[i]));
            }
        }
        s
    }

    /// Parses the text form; a graph file (`vertices`/`edge`) is also accepted.
    pub fn parse(text: &str) -> crate::Result<RelStructure> {
        use crate::error::parse_err;
        if text.lines().any(|l| l.split_whitespace().next() == Some("vertices")) {
            return Ok(RelStructure::from_graph(&Graph::parse(text)?));
        }
        let mut s: Option<RelStructure> = None;
        let mut rels: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
        let mut labels: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.is_empty() {
                continue;
            }
            let find = |s: &Option<RelStructure>, id: &str| -> crate::Result<usize> {
                s.as_ref()
                    .and_then(|s| s.domain.iter().position(|d| d == id))
                    .ok_or_else(|| parse_err(ln + 1, 1, format!("unknown element `{id}`")))
            };
            match parts[0] {
                "domain" => s = Some(RelStructure::new(parts[1..].iter().map(|p| p.to_string()).collect())),
                "rel" if parts.len() == 4 => {
                    let (a, b) = (find(&s, parts[2])?, find(&s, parts[3])?);
                    rels.entry(parts[1].to_string()).or_default().push((a, b));
                }
                "label" if parts.len() == 3 => {
                    let a = find(&s, parts[2])?;
                    labels.entry(parts[1].to_string()).or_default().push(a);
                }
                other => return Err(parse_err(ln + 1, 1, format!("unexpected `{other}`"))),
            }
        }
        let mut s = s.ok_or_else(|| parse_err(1, 1, "missing domain line"))?;
        for (name, pairs) in rels {
            s.add_relation(&name, pairs);
        }
        for (name, members) in labels {
            s.add_label(&name, members);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_lookup_both_storages() {
        let pairs = [(0, 1), (2, 0), (1, 1)];
        let small = Relation::new(3, pairs);
        assert!(small.holds(0, 1) && small.holds(2, 0) && small.holds(1, 1));
        assert!(!small.holds(1, 0));
        let big = Relation::new(BITS_LIMIT + 1, pairs);
        assert!(big.bits.is_none());
        assert!(big.holds(0, 1) && !big.holds(1, 0));
        assert_eq!(big.inn(0), &[2]);
    }

    #[test]
    fn text_round_trip() {
        let mut s = RelStructure::new(vec!["a".into(), "b".into()]);
        s.add_relation("leq", [(0, 0), (0, 1), (1, 1)]);
        s.add_label("red", [1]);
        let again = RelStructure::parse(&s.to_text()).unwrap();
        assert_eq!(again, s);
        let g = RelStructure::parse("vertices x y\nedge x y\n").unwrap();
        assert!(g.relation(EDGE).unwrap().holds(1, 0));
    }

    #[test]
    fn induced_keeps_labels() {
        let mut s = RelStructure::with_size(3);
        s.add_relation("r", [(0, 2), (2, 1)]);
        s.add_label("l", [2]);
        let t = s.induced(&[2, 1]);
        assert!(t.relation("r").unwrap().holds(0, 1));
        assert_eq!(t.labels_of(0), vec!["l"]);
        assert!(t.labels_of(1).is_empty());
    }
}
