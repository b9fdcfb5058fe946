#!/usr/bin/env python3
"""Regenerates data/lexicon/emotions.lex from the word lists below.

Words are grouped by emotion and intensity tier. A word listed under several
emotions gets one weight per emotion. Output is sorted, so the file is stable
under reordering of the lists.
"""

import pathlib
import sys

TIERS = {"strong": 0.9, "medium": 0.7, "mild": 0.5, "faint": 0.3}

WORDS = {
    "joy": {
        "strong": """love loved loving adore adored awesome amazing fantastic wonderful
            ecstatic thrilled delighted overjoyed elated euphoric blissful brilliant
            superb outstanding magnificent perfect incredible phenomenal stunning
            marvelous joyful joy""",
        "medium": """happy happiness glad excited exciting enjoy enjoyed enjoying great
            beautiful gorgeous lovely cheerful pleased proud grateful thankful thanks
            yay hooray celebrate celebrating celebration win winning winner fun
            sweet excellent impressive impressed smile smiling laugh laughing
            delightful charming terrific fabulous splendid glorious best favorite
            favourite""",
        "mild": """good nice cool like liked likes fine smooth fast sleek solid
            comfortable satisfied satisfying enjoyable pleasant neat handy useful
            upgrade upgraded shiny fresh crisp slick elegant stylish hope hopeful
            optimistic relief relieved calm peaceful content friendly kind warm
            bright clever smart wow yes congrats congratulations lucky fortunate
            recommend recommended worth bargain treat gift cute adorable wonderfully
            heavenly paradise sunshine beloved cherish cherished praise praised
            excite rejoice triumph victory success successful flawless gem""",
        "faint": """ok okay decent alright fair improved improvement better works
            working""",
    },
    "sadness": {
        "strong": """heartbroken devastated miserable depressed depressing grief
            grieving tragic tragedy mourn mourning despair hopeless sorrow
            anguish""",
        "medium": """sad sadness unhappy cry crying cried tears lonely alone lost
            loss miss missing missed regret regretting sorry gloomy down upset
            hurt hurting painful disappointed disappointing disappointment
            heartbreak unfortunate unfortunately sigh broke broken dead died
            dying goodbye farewell""",
        "mild": """bored boring tired exhausted dull meh blue empty sorrowful
            melancholy weary homesick nostalgic lament wish wished pity poor
            drained slow lag laggy dim fading faded outdated obsolete old
            cracked shattered dying gloom grieve weep weeping sob sobbing mournful
            downcast dismal bleak forlorn abandoned neglected rejected""",
        "faint": """quiet gray grey rainy""",
    },
    "anger": {
        "strong": """furious enraged outraged livid rage raging hate hated hatred
            infuriating infuriated seething""",
        "medium": """angry anger mad annoyed annoying irritated irritating pissed
            frustrated frustrating frustration hostile resent resentful bitter
            outrage scam scammed ripoff cheated liar lies lying stupid idiot
            idiotic ridiculous unacceptable terrible worst useless garbage trash
            rubbish damn screw""",
        "mild": """annoy rant complain complaint complaining argue argument fight
            fighting yell yelling shout shouting blame unfair overpriced
            greedy rude insult insulting offended offensive hostile stubborn
            overrated cancel refund boycott fed fuming grumpy cranky irate
            aggravating aggravated provoked hostility wrath vengeful spiteful
            scream screaming slam slammed furiously""",
        "faint": """ugh whatever seriously""",
    },
    "fear": {
        "strong": """terrified terrifying horrified horror panic panicking
            petrified dread dreading nightmare explode exploded explosion
            exploding""",
        "medium": """afraid fear fearful scared scary frightened frightening worried
            worry worrying anxious anxiety nervous alarming alarmed danger
            dangerous unsafe threat threatened risk risky fire burning burn burned
            hazard recall recalled emergency crash crashed""",
        "mild": """uneasy concern concerned concerning unsure doubt doubtful
            suspicious warning warn careful cautious hesitant insecure tense
            stress stressed stressful shaky uncertain vulnerable hack hacked
            leak leaked overheating overheat smoke smoking melt melted spooky
            creepy eerie jittery paranoid paranoia apprehensive spooked startled
            trembling shiver ominous menacing helpless""",
        "faint": """hmm maybe""",
    },
    "disgust": {
        "strong": """disgusting disgusted disgust gross revolting repulsive vile
            nauseating sickening repugnant""",
        "medium": """nasty yuck ew eww ugly filthy dirty awful horrible horrid
            hideous sick sickened creep shameful shame pathetic cheap tacky
            lousy crappy crap sucks sucked""",
        "mild": """bad weird tasteless greasy smelly stinks stink stinky rotten
            sloppy bloated bloatware spam spammy clunky junk knockoff copycat
            copied copy fake shady sleazy cringe cringey lame distasteful
            loathe loathing abhor contempt despise despised repellent yucky
            grimy foul""",
        "faint": """eh odd""",
    },
}

NEGATORS = """not no never none nobody nothing neither nor cannot cant dont
    doesnt didnt isnt wasnt arent aint wont wouldnt shouldnt couldnt hardly
    barely without t""".split()
# "t" is what remains of an n't contraction after tokenization ("don't" ->
# "don", "t"), so it negates the next two tokens like "not" does.


def build():
    merged = {}
    for emotion, tiers in WORDS.items():
        for tier, words in tiers.items():
            weight = TIERS[tier]
            for word in words.split():
                slot = merged.setdefault(word, {})
                slot[emotion] = max(slot.get(emotion, 0.0), weight)
    return merged


def render(merged):
    lines = [
        "# Five-emotion lexicon: token<TAB>emotion:weight[,emotion:weight]",
        "# Generated by scripts/make_lexicon.py; edit the script, not this file.",
        "",
    ]
    for word in sorted(NEGATORS):
        lines.append(f"!negator\t{word}")
    lines.append("")
    for word in sorted(merged):
        weights = ",".join(f"{e}:{w:.1f}" for e, w in sorted(merged[word].items()))
        lines.append(f"{word}\t{weights}")
    return "\n".join(lines) + "\n"


def main():
    merged = build()
    if len(merged) < 500:
        sys.exit(f"only {len(merged)} entries; need at least 500")
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "lexicon" / "emotions.lex"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render(merged), encoding="utf-8")
    print(f"wrote {len(merged)} entries and {len(NEGATORS)} negators to {out}")


if __name__ == "__main__":
    main()
