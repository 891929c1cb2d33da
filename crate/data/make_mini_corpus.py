"""Generates the bundled 50-document news-style corpus.

Stories are templated: a lead that states the event, supporting detail,
quotes and background. Highlights paraphrase the lead and one or two key
sentences, which sometimes sit deep in the body.
"""
import json
import random
import sys

rng = random.Random(20240611)

CITIES = ["Boston", "Denver", "Chicago", "Seattle", "Atlanta", "Houston", "Portland",
          "Phoenix", "Detroit", "Nashville", "Miami", "Dallas"]
PEOPLE = ["Maria Lopez", "James Carter", "Aisha Khan", "Daniel Brooks", "Elena Rossi",
          "Samuel Okafor", "Grace Chen", "Robert Hale", "Nadia Petrov", "Thomas Reed",
          "Laura Winters", "Victor Huang"]
ORGS = ["Northfield Energy", "Harbor Bank", "Summit Motors", "Bluewater Foods",
        "Crescent Health", "Ironwood Steel", "Pinecrest Airlines", "Meridian Telecom"]
TEAMS = ["Falcons", "Rangers", "Comets", "Wolves", "Pirates", "Titans", "Hawks", "Sharks"]
AGENCIES = ["the National Weather Service", "the city council", "the state legislature",
            "the health department", "the transit authority", "the school board"]

FILLER = [
    "Officials said more information would be released later in the week.",
    "The announcement came after several months of speculation.",
    "Residents gathered near the site on {day} afternoon.",
    "Local media had reported on the issue for some time.",
    "It was not immediately clear how the decision would be received.",
    "Some observers said the move was long overdue.",
    "A spokesperson declined to comment on the details.",
    "The story drew wide attention on social media.",
    "Analysts cautioned that the situation could change quickly.",
    "Similar efforts in other regions have produced mixed results.",
    "Many people said they were surprised by the news.",
    "The area has seen rapid growth over the past decade.",
    "Critics questioned whether the plan went far enough.",
    "Supporters described the outcome as a step forward.",
    "Further meetings are scheduled for next month.",
]
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]


def economy():
    org = rng.choice(ORGS)
    city = rng.choice(CITIES)
    ceo = rng.choice(PEOPLE)
    jobs = rng.choice([120, 350, 800, 1200, 2400, 4500])
    pct = rng.choice([3.5, 7, 12, 18, 22.4, 31])
    rev = rng.choice([1.2, 2.8, 4.5, 9.1, 15.3])
    plant = rng.choice(["factory", "distribution center", "research campus", "headquarters"])
    key = [
        f"{org} will cut {jobs:,} jobs as part of a restructuring plan announced on {rng.choice(DAYS)}.",
        f"The company said profits fell {pct}% in the last quarter.",
        f"{org} plans to close its {plant} in {city} by the end of next year.",
    ]
    support = [
        f"Chief executive {ceo} said the company needed to reduce costs to remain competitive.",
        f"Revenue for the year reached ${rev} billion, below analyst forecasts.",
        f"Shares of {org} dropped sharply in early trading after the news.",
        f"Union leaders in {city} said they would seek talks with management.",
        f"\"This was a difficult decision for everyone involved,\" {ceo.split()[0]} said.",
        f"The {plant} employs about {jobs // 2:,} workers, according to company filings.",
        f"The company expects the changes to save roughly ${rng.choice([150, 300, 600])} million a year.",
        f"{org} was founded in {city} more than {rng.choice([40, 60, 85])} years ago.",
    ]
    return key, support, [
        f"{org} to cut {jobs:,} jobs in restructuring.",
        f"Quarterly profits fell {pct}%, the company says.",
        f"{city} {plant} will close by the end of next year.",
    ]


def sports():
    a, b = rng.sample(TEAMS, 2)
    city = rng.choice(CITIES)
    star = rng.choice(PEOPLE)
    coach = rng.choice([p for p in PEOPLE if p != star])
    sa = rng.randint(3, 7)
    sb = rng.randint(0, sa - 1)
    pts = rng.choice([2, 3])
    streak = rng.randint(3, 9)
    key = [
        f"The {city} {a} beat the {b} {sa}-{sb} on {rng.choice(DAYS)} night to reach the final.",
        f"{star} scored {pts} goals, including the winner late in the third period.",
        f"The victory extends the {a} winning streak to {streak} games.",
    ]
    support = [
        f"Coach {coach} praised the team for its discipline in defense.",
        f"\"We knew this game would be tough,\" {star.split()[0]} told reporters.",
        f"The {b} had won both previous meetings between the teams this season.",
        f"A crowd of {rng.choice([14, 18, 21, 25]):,}000 fans filled the arena in {city}.",
        f"The {a} will face the winner of the other semifinal next week.",
        f"{star} has now scored {rng.randint(20, 45)} goals this season.",
        f"The {b} goalkeeper made {rng.randint(25, 40)} saves in the loss.",
        f"Tickets for the final are expected to sell out within hours.",
    ]
    return key, support, [
        f"{a} beat {b} {sa}-{sb} to reach the final.",
        f"{star} scores {pts} goals including the winner.",
        f"{a} extend their winning streak to {streak} games.",
    ]


def weather():
    city = rng.choice(CITIES)
    agency = "the National Weather Service"
    inches = rng.choice([8, 12, 16, 20, 24])
    homes = rng.choice([15000, 40000, 85000, 120000])
    wind = rng.choice([45, 60, 70, 85])
    official = rng.choice(PEOPLE)
    key = [
        f"A powerful storm dropped up to {inches} inches of snow on {city} and nearby towns.",
        f"More than {homes:,} homes lost power as winds reached {wind} miles per hour.",
        f"Schools across the region will remain closed on {rng.choice(DAYS)}.",
    ]
    support = [
        f"Forecasters at {agency} warned that travel would be dangerous overnight.",
        f"Mayor {official} urged residents to stay off the roads.",
        f"Crews worked through the night to clear the main highways.",
        f"\"Please check on your neighbors,\" {official.split()[0]} said at a news conference.",
        f"Several flights out of {city} were canceled or delayed.",
        f"Utility companies said power could take two days to restore in some areas.",
        f"The storm is expected to move east by the weekend.",
        f"Temperatures are forecast to drop below {rng.choice([5, 10, 15])} degrees.",
    ]
    return key, support, [
        f"Storm drops up to {inches} inches of snow on {city}.",
        f"More than {homes:,} homes lose power.",
        f"Schools will remain closed across the region.",
    ]


def politics():
    agency = rng.choice(AGENCIES[1:])
    city = rng.choice(CITIES)
    leader = rng.choice(PEOPLE)
    votes = rng.randint(5, 9)
    budget = rng.choice([45, 120, 250, 600])
    topic = rng.choice(["housing", "public transit", "road repairs", "park expansion", "water systems"])
    key = [
        f"Members of {agency} in {city} voted {votes}-{rng.randint(1, votes - 1)} to approve a ${budget} million plan for {topic}.",
        f"The plan will raise property taxes by {rng.choice([1.5, 2, 3.2])}% over five years.",
        f"Construction could begin as early as next spring.",
    ]
    support = [
        f"{leader}, who sponsored the measure, called it a historic investment.",
        f"Opponents argued that the cost would fall on working families.",
        f"\"We cannot keep putting this off,\" {leader.split()[0]} said during the debate.",
        f"The meeting lasted more than {rng.randint(3, 6)} hours and drew dozens of speakers.",
        f"A similar proposal failed two years ago by a single vote.",
        f"Funding will also come from state and federal grants.",
        f"An independent audit of the program is planned after the first year.",
        f"Public hearings on the details will be held in {city} next month.",
    ]
    return key, support, [
        f"{city} approves ${budget} million plan for {topic}.",
        f"Property taxes will rise under the plan.",
        f"Construction could begin next spring.",
    ]


def science():
    lead = rng.choice(PEOPLE)
    city = rng.choice(CITIES)
    n = rng.choice([200, 1500, 4800, 12000])
    pct = rng.choice([18, 25, 34, 40])
    topic = rng.choice(["daily walking", "a diet rich in fiber", "regular sleep", "reading aloud to children"])
    outcome = rng.choice(["heart disease", "memory loss", "diabetes", "depression"])
    key = [
        f"A new study found that {topic} lowered the risk of {outcome} by {pct}%.",
        f"Researchers followed {n:,} adults for more than a decade.",
        f"The benefits appeared even among people who started later in life.",
    ]
    support = [
        f"The research was led by Dr. {lead} at a university in {city}.",
        f"The findings were published in a leading medical journal on {rng.choice(DAYS)}.",
        f"\"The results were stronger than we expected,\" {lead.split()[0]} said.",
        f"Participants answered detailed questions about their habits every two years.",
        f"Experts not involved in the study called the results encouraging.",
        f"The authors noted that the study could not prove cause and effect.",
        f"Earlier work by Smith et al. reported similar but smaller effects.",
        f"Future trials will test whether the effect holds in other countries.",
    ]
    return key, support, [
        f"Study links {topic} to {pct}% lower risk of {outcome}.",
        f"Researchers followed {n:,} adults for over a decade.",
        f"Benefits seen even for those who started later in life.",
    ]


TOPICS = [economy, sports, weather, politics, science]


def document(k):
    key, support, highlights = TOPICS[k % len(TOPICS)]()
    rng.shuffle(support)
    filler = [f.format(day=rng.choice(DAYS)) for f in rng.sample(FILLER, rng.randint(2, 6))]
    body = [key[0]]
    rest = support + filler
    rng.shuffle(rest)
    # Lead-heavy stories keep their key facts near the top; others bury one.
    deep = rng.random() < 0.35
    slots = [1, 2] if not deep else [rng.randint(1, 3), rng.randint(5, len(rest))]
    body.extend(rest)
    for fact, slot in sorted(zip(key[1:], slots), key=lambda t: t[1]):
        body.insert(min(slot, len(body)), fact)
    n_hl = rng.choice([2, 3, 3, 3])
    return {
        "id": f"news-{k + 1:03d}",
        "body": " ".join(body),
        "reference": highlights[:n_hl],
    }


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "mini_corpus.jsonl"
    with open(out, "w", encoding="utf-8") as fh:
        for k in range(50):
            fh.write(json.dumps(document(k), ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
