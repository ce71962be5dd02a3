use orbicover::covers::build_tower;

fn main() {
    for (m, n) in [(2u64, 3u64), (2, 4), (2, 5), (3, 4), (3, 5), (2, 6)] {
        let t = build_tower(m, n).unwrap();
        let dm = t.comp_m.deck_elements().unwrap().len();
        let dn = t.comp_n.deck_elements().unwrap().len();
        let df = t.full.deck_elements().unwrap().len();
        println!(
            "(m,n)=({m},{n}): comp_m deck {dm}/{} comp_n deck {dn}/{} full deck {df}/{} commutes {}",
            t.comp_m.degree(), t.comp_n.degree(), t.full.degree(), t.commutes
        );
    }
}
