use mkstep_harness::{gen_program, GenConfig};
use mkstep_service::{Session, SnapshotView, SCHEMA_VERSION};
use serde_json::Value;

const CAT_DOG: &str = "(defrel (same x y) (== x y))
(run* (q) (conde ((same q 'cat)) ((same q 'dog))))";

fn roundtrip(json: &str) {
    let view: SnapshotView = serde_json::from_str(json).unwrap();
    assert_eq!(serde_json::to_string(&view).unwrap(), json);
}

#[test]
fn json_roundtrips_byte_identically() {
    for seed in 0..60 {
        let g = gen_program(&GenConfig {
            recursion: seed % 2 == 0,
            ..GenConfig::with_seed(seed)
        });
        for rules in ["interleaving", "dfs"] {
            let mut s = Session::create(String::new(), &g.source, rules).unwrap();
            for _ in 0..60 {
                roundtrip(s.json());
                if s.focus().terminal {
                    break;
                }
                s.step_forward().unwrap();
            }
        }
    }
}

fn find<'a>(n: &'a Value, kind: &str, out: &mut Vec<&'a Value>) {
    if n["kind"] == kind {
        out.push(n);
    }
    for c in n["children"].as_array().unwrap() {
        find(c, kind, out);
    }
}

#[test]
fn promotion_and_flags() {
    let mut s = Session::create(String::new(), CAT_DOG, "interleaving").unwrap();
    let mut saw_go = false;
    loop {
        let v: Value = serde_json::from_str(s.json()).unwrap();
        assert_eq!(v["version"], SCHEMA_VERSION);
        let mut gos = Vec::new();
        find(&v["tree"], "go", &mut gos);
        for g in gos {
            saw_go = true;
            let leaf = &g["children"][0];
            assert_eq!(leaf["kind"], "leaf");
            assert_eq!(leaf["flags"]["go_marked"], true);
            assert!(leaf["goal"]["uid"].is_u64());
        }
        if v["tree"]["kind"] == "plus" {
            let left = &v["tree"]["children"][0];
            assert_eq!(left["goal"]["text"], "⊤");
            assert_eq!(left["state"]["reified"], "cat");
            assert_eq!(v["answers"][0]["reified"], "cat");
            assert_eq!(v["focus_path"], serde_json::json!(["plus_tail"]));
            assert_eq!(v["tree"]["children"][1]["flags"]["on_active_spine"], true);
            assert_eq!(left["flags"]["on_active_spine"], false);
            break;
        }
        s.step_forward().unwrap();
    }
    assert!(saw_go);
}

#[test]
fn state_provenance_follows_steps() {
    let mut s = Session::create(String::new(), CAT_DOG, "interleaving").unwrap();
    let v: Value = serde_json::from_str(s.json()).unwrap();
    assert_eq!(v["source_map"]["states"].as_array().unwrap().len(), 1);
    s.step_many(2).unwrap();
    let v: Value = serde_json::from_str(s.json()).unwrap();
    let states = v["source_map"]["states"].as_array().unwrap();
    assert_eq!(states.len(), 2);
    assert_eq!(states[1]["rule"], "DistrDisj");
    assert_eq!(states[1]["parent"], states[0]["uid"]);
    assert_eq!(v["events"]["minted"][0]["uid"], states[1]["uid"]);
    s.step_back();
    let v: Value = serde_json::from_str(s.json()).unwrap();
    assert_eq!(v["source_map"]["states"].as_array().unwrap().len(), 1);
}

#[test]
fn goal_spans_point_at_source() {
    let s = Session::create(String::new(), CAT_DOG, "interleaving").unwrap();
    let v: Value = serde_json::from_str(s.json()).unwrap();
    let goals = v["source_map"]["goals"].as_array().unwrap();
    for g in goals {
        let (a, b) = (
            g["span"]["start"]["offset"].as_u64().unwrap() as usize,
            g["span"]["end"]["offset"].as_u64().unwrap() as usize,
        );
        assert_eq!(&CAT_DOG[a..b], g["text"].as_str().unwrap());
    }
    let texts: Vec<&str> = goals.iter().map(|g| g["text"].as_str().unwrap()).collect();
    assert!(texts.contains(&"(same q 'cat)"));
    assert!(texts.contains(&"(== x y)"));
}
