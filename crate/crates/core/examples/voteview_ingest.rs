//! Reads a Voteview-style export (votes, members and rollcall dates) and
//! scores it with party-code groups.

use std::io::Cursor;

use bcall::io::read_voteview;
use bcall::{bcall_scores, Groups, PeriodKey, Side};

const VOTES: &str = "congress,chamber,rollnumber,icpsr,cast_code
118,House,1,10,1
118,House,1,20,1
118,House,1,30,6
118,House,1,40,6
118,House,2,10,1
118,House,2,20,7
118,House,2,30,1
118,House,2,40,4
118,House,3,10,6
118,House,3,20,6
118,House,3,30,1
118,House,3,40,9
";

const MEMBERS: &str = "icpsr,bioname,party_code
10,\"ALVAREZ, Rosa\",100
20,\"BRANDT, Kai\",100
30,\"COLE, Imani\",200
40,\"DOYLE, Sam\",200
";

const ROLLCALLS: &str = "congress,chamber,rollnumber,date
118,House,1,2023-01-09
118,House,2,2023-01-10
118,House,3,2023-01-12
";

fn main() -> bcall::Result<()> {
    let m = read_voteview(
        Cursor::new(VOTES),
        Some(Cursor::new(MEMBERS)),
        Some(Cursor::new(ROLLCALLS)),
    )?;
    for (i, l) in m.legislators().iter().enumerate() {
        let casts: Vec<&str> = m.row(i).iter().map(|c| c.as_str()).collect();
        println!(
            "{:<14} party {} {:?}",
            l.name,
            l.party.as_deref().unwrap_or("?"),
            casts
        );
    }

    let groups: Groups = m
        .legislators()
        .iter()
        .map(|l| {
            let side = if l.party.as_deref() == Some("100") {
                Side::Left
            } else {
                Side::Right
            };
            (l.id.clone(), side)
        })
        .collect();
    let run = bcall_scores(&m, &groups, &PeriodKey::new("118"))?;
    for s in &run.scores {
        println!(
            "{} d1 {:+.3} d2 {:.3} over {} votes",
            s.legislator_id, s.d1, s.d2, s.n_votes
        );
    }
    Ok(())
}
