"""Regenerate the shipped sample fixtures under src/skillnet/data/.

    python tools/make_sample.py

Output is fully determined by SEED.
"""

import json
import random
from datetime import date, timedelta
from pathlib import Path

SEED = 7
OUT = Path(__file__).resolve().parent.parent / "src" / "skillnet" / "data"

GROUPS = {
    "Generalists": [
        "Communication", "English", "Teamwork", "Problem Solving", "Management",
        "Business", "Planning", "Research", "Writing", "Time Management",
        "Education", "Leadership", "Presentation", "Negotiation",
    ],
    "Infrastructure and Security": [
        "Linux", "Windows", "Networking|network administration", "Security|cybersecurity",
        "Servers", "Virtualization", "Troubleshooting", "Hardware", "Automation",
        "Operating Systems|OS", "Firewall", "VMware", "Active Directory|AD",
    ],
    "Software Development": [
        "SQL", "MySQL", "Java", "JavaScript|JS|ECMAScript", "Python", "Git", "HTML",
        "C++|cpp", "C#|csharp", ".NET|dotnet", "Scrum", "Testing", "Databases",
        "Node.js|nodejs", "Software Development",
    ],
    "Embedded Systems": [
        "Embedded Systems", "Microcontrollers", "Raspberry Pi", "Altium Designer",
        "Simulink", "RS232", "Embedded Software", "Arduino",
    ],
}

# per profile: (primary group, probability of adding generalist skills by year offset)
PROFILES = [
    ("Software Development", 0.42),
    ("Infrastructure and Security", 0.33),
    ("Generalists", 0.20),
    ("Embedded Systems", 0.05),
]

OPENERS = [
    "We are hiring a {title}.", "Join our team as {title}!", "{title} wanted -",
    "Looking for an experienced {title};", "Opening: {title} (full time).",
]
TITLES = {
    "Software Development": ["Backend Developer", "Full-Stack Engineer", "Software Engineer"],
    "Infrastructure and Security": ["System Administrator", "Network Engineer", "Security Analyst"],
    "Generalists": ["Project Coordinator", "IT Manager", "Business Analyst"],
    "Embedded Systems": ["Embedded Engineer", "Firmware Developer", "Hardware Designer"],
}
FILLER = [
    "Requirements:", "Nice to have:", "You will work with", "Experience in",
    "Strong knowledge of", "Familiarity with", "and", "plus", "as well as",
]


def phrase(entry: str, rng: random.Random) -> str:
    forms = entry.split("|")
    form = rng.choice(forms) if len(forms) > 1 and rng.random() < 0.4 else forms[0]
    return rng.choice([form, form.lower(), form.upper()]) if rng.random() < 0.3 else form


def make_ad(i: int, day: date, rng: random.Random) -> dict:
    year_shift = (day.year - 2019) * 0.03
    primary = rng.choices([p for p, _ in PROFILES], weights=[w for _, w in PROFILES])[0]
    picks = rng.sample(GROUPS[primary], rng.randint(2, 5))
    if primary != "Generalists" and rng.random() < 0.85 - year_shift:
        picks += rng.sample(GROUPS["Generalists"], rng.randint(1, 3))
    for other in GROUPS:
        if other not in (primary, "Generalists") and rng.random() < 0.12:
            picks.append(rng.choice(GROUPS[other]))
    rng.shuffle(picks)

    parts = [rng.choice(OPENERS).format(title=rng.choice(TITLES[primary]))]
    for p in picks:
        parts.append(rng.choice(FILLER))
        parts.append(phrase(p, rng) + rng.choice([",", ";", "", ".", " /"]))
    if rng.random() < 0.2:
        parts.append("Salary negotiable. Remote-friendly office.")
    return {"id": f"ad-{i:04d}", "text": " ".join(parts), "date": day.isoformat()}


def main() -> None:
    rng = random.Random(SEED)
    OUT.mkdir(parents=True, exist_ok=True)

    lines = ["# Sample skill lexicon: canonical|alias|alias"]
    for group, entries in GROUPS.items():
        lines.append(f"# {group}")
        lines.extend(entries)
    (OUT / "sample_lexicon.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    ads = []
    for year in range(2019, 2024):
        for k in range(40):
            day = date(year, 1, 1) + timedelta(days=rng.randrange(365))
            ads.append(make_ad(len(ads) + 1, day, rng))
    with open(OUT / "sample_corpus.jsonl", "w", encoding="utf-8") as fh:
        for ad in ads:
            fh.write(json.dumps(ad) + "\n")


if __name__ == "__main__":
    main()
