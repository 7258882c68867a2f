//! The JSON graph document shared by the library and the command line.
//!
//! ```json
//! {"vertices": 3, "edges": [{"id": 0, "u": 0, "v": 1, "signed": true}],
//!  "terminals": {"u": 0, "v": 1}}
//! ```
//!
//! `signed` defaults to `true`. Edge ids need not be dense; missing ids are
//! empty slots, so ids written by a masked graph survive a round trip.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Multigraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    #[serde(default = "signed_default")]
    pub signed: bool,
}

fn signed_default() -> bool {
    true
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminals {
    pub u: usize,
    pub v: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminals: Option<Terminals>,
}

impl GraphDoc {
    pub fn from_graph(g: &Multigraph, terminals: Option<(VertexId, VertexId)>) -> Self {
        GraphDoc {
            vertices: g.vertex_count(),
            edges: g
                .edges()
                .map(|(id, e)| EdgeDoc { id: id.0, u: e.u.0, v: e.v.0, signed: e.signed })
                .collect(),
            terminals: terminals.map(|(u, v)| Terminals { u: u.0, v: v.0 }),
        }
    }

    pub fn to_graph(&self) -> Result<Multigraph> {
        let bound = self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        let mut slots: Vec<Option<Edge>> = vec![None; bound];
        for e in &self.edges {
            if slots[e.id].is_some() {
                return Err(Error::InvalidGraph(format!("edge id {} appears twice", e.id)));
            }
            slots[e.id] = Some(Edge { u: VertexId(e.u), v: VertexId(e.v), signed: e.signed });
        }
        Multigraph::from_slots(self.vertices, slots)
    }

    pub fn terminals(&self) -> Option<(VertexId, VertexId)> {
        self.terminals.map(|t| (VertexId(t.u), VertexId(t.v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, EdgeSet};

    #[test]
    fn round_trip_keeps_sparse_ids() {
        let g = Multigraph::from_signed_edges(3, [(0, 1, true), (1, 2, false), (2, 0, true)]).unwrap();
        let g = g.without_edges(&EdgeSet::from_iter([EdgeId(1)]));
        let doc = GraphDoc::from_graph(&g, Some((VertexId(0), VertexId(2))));
        let json = serde_json::to_string(&doc).unwrap();
        let back: GraphDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        let h = back.to_graph().unwrap();
        assert_eq!(h.slots(), g.slots());
        assert_eq!(back.terminals(), Some((VertexId(0), VertexId(2))));
    }

    #[test]
    fn defaults_and_errors() {
        let doc: GraphDoc = serde_json::from_str(r#"{"vertices":2,"edges":[{"id":0,"u":0,"v":1}]}"#).unwrap();
        assert!(doc.to_graph().unwrap().edge(EdgeId(0)).unwrap().signed);
        assert_eq!(doc.terminals(), None);
        let dup: GraphDoc =
            serde_json::from_str(r#"{"vertices":2,"edges":[{"id":0,"u":0,"v":1},{"id":0,"u":1,"v":0}]}"#).unwrap();
        assert!(matches!(dup.to_graph(), Err(Error::InvalidGraph(_))));
        let looped: GraphDoc = serde_json::from_str(r#"{"vertices":2,"edges":[{"id":0,"u":1,"v":1}]}"#).unwrap();
        assert!(matches!(looped.to_graph(), Err(Error::LoopWouldForm { .. })));
    }
}
