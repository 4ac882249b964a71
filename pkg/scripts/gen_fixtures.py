#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus under src/gapforge/fixtures/.

The fixture articles are synthetic miniatures written so that the
deterministic mock pipeline produces known gap counts per language and
a known anchor for the French empress fact. This script parses the raw
texts with the production extract parser, writes the article JSON files
and the interlanguage table, then runs the mock pipeline and asserts
every property the test suite relies on. Run it after editing the raw
texts; commit the regenerated JSON.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gapforge.align import classify_article_pair  # noqa: E402
from gapforge.articles import Article  # noqa: E402
from gapforge.corpus import parse_extract, title_slug  # noqa: E402
from gapforge.decompose import decompose_article  # noqa: E402
from gapforge.enrich import anchor_for  # noqa: E402
from gapforge.gapselect import GapInventory, select_for_topic  # noqa: E402
from gapforge.providers import MockEmbeddingProvider, MockLlmProvider  # noqa: E402

FIXTURES = REPO / "src" / "gapforge" / "fixtures"

MING_SENTENCE = (
    "The Peking roast duck that came to be associated with the term was "
    "fully developed during the later Ming dynasty."
)

PEKING_DUCK_EN = """\
Peking duck is a roast duck dish from Beijing that has been prepared since the imperial era. The dish is prized for its thin and crispy skin. Sliced meat is often served with spring pancakes, sweet bean sauce, and sliced scallions.

== History ==

The Peking roast duck that came to be associated with the term was fully developed during the later Ming dynasty.

By the Qianlong period the dish had become popular with the upper classes. Restaurants specializing in the dish opened in the capital during the early twentieth century.

== Preparation ==

Ducks bred for the dish are roasted in either a closed oven or a hung oven. The skin is glazed with maltose syrup before roasting. Cooks serve the skin first while it is still crisp.

== Serving ==

Diners wrap the meat in thin pancakes with scallions and sauce. The dish is listed among the most famous dishes of Beijing cuisine.
"""

PEKING_DUCK_FR = """\
Le canard laqué de Pékin est une spécialité emblématique de la cuisine pékinoise. Les gastronomes français le décrivent comme « the dish is prized for its thin and crispy skin ». La recette traditionnelle exige un four spécifique et plusieurs jours de travail.

== Histoire ==

Le canard laqué de Pékin (Peking roast duck) devint, sous la dynastie Qing, le plat favori de l'impératrice Cixi. La cour impériale réservait les meilleurs canards aux banquets d'hiver. Des chroniqueurs décrivent des banquets où le canard était découpé en cent huit tranches fines.

Au dix-neuvième siècle, des voyageurs européens rapportèrent la recette dans leurs carnets. Un traité culinaire français de 1870 mentionne déjà le canard laqué. Les restaurants historiques de Pékin conservent des registres de leurs fours centenaires. D'après l'édition anglaise, « the Peking roast duck that came to be associated with the term was fully developed during the later Ming dynasty ».

== Préparation ==

Les canards sont gonflés d'air entre la peau et la chair avant la cuisson. La peau est ébouillantée puis badigeonnée d'un sirop de maltose. Les cuisiniers laissent sécher le canard pendant vingt-quatre heures dans un endroit frais.

Le four traditionnel brûle du bois d'arbres fruitiers comme le jujubier. Ce bois parfume la peau d'un arôme fruité.
"""

PEKING_DUCK_RU = """\
Утка по-пекински считается одним из самых известных блюд китайской столицы. Русские путешественники впервые описали это блюдо в конце девятнадцатого века. По английской версии, «sliced meat is often served with spring pancakes, sweet bean sauce, and sliced scallions».

== История ==

Рецепт утки по-пекински впервые записан в поваренной книге четырнадцатого века. Императорская кухня держала особую породу уток для этого блюда. Во времена династии Цин блюдо подавали на дворцовых приёмах.

В Москве первый ресторан с уткой по-пекински открылся в пятидесятые годы двадцатого века. Советские повара адаптировали рецепт под местные печи.

== Подача ==

После мяса гостям подают суп из китайской капусты. Кожу подают отдельно с сахаром по старинному обычаю. According to the English edition, "diners wrap the meat in thin pancakes with scallions and sauce".

В северных провинциях утку дополняют чесночным соусом. Подача сопровождается церемонией разделки перед гостями.
"""

PEKING_DUCK_ZH = """\
北京烤鸭是北京最具代表性的名菜之一。它以色泽红艳、肉质细嫩而闻名。英文版介绍说：the dish is listed among the most famous dishes of Beijing cuisine。

== 历史 ==

烤鸭技艺起源于南北朝时期的炙鸭。明朝迁都北京后，烤鸭从南京传入北京。便宜坊创建于明永乐十四年，以焖炉烤鸭著称。全聚德创建于清同治三年，以挂炉烤鸭著称。

== 制作 ==

师傅在烤制前会从鸭翅下充气，使皮肉分离。鸭坯要先用滚水浇烫，再涂上麦芽糖浆。晾坯需要在通风处进行数小时。

挂炉以枣木或梨木为燃料。果木的香气会渗入鸭皮。

== 食用 ==

传统吃法是在肉之后上一道白菜汤。烤鸭搭配荷叶饼、甜面酱和葱丝食用。片鸭师要在几分钟内片出均匀的鸭片。
"""

INJERA_EN = """\
Injera is a sour fermented pancake with a spongy texture from the Horn of Africa. It is the staple bread of Ethiopia and Eritrea.

== Ingredients ==

Injera is traditionally made from teff flour. Teff grows in the highlands of Ethiopia. The batter ferments for several days before baking.

== Serving ==

Stews and salads are served on top of the injera. Diners tear pieces of injera to scoop the stews. The bread soaked with juices is eaten last.
"""

INJERA_FR = """\
L'injera est une galette fermentée au goût acidulé, emblème des tables éthiopiennes. Elle ressemble au lahoh, une crêpe du Moyen-Orient et de la Somalie. Les voyageurs comparent sa texture à celle d'une éponge de mie très souple.

== Préparation ==

La pâte repose dans des jarres en terre cuite pendant trois jours. Une partie du levain est gardée d'une fournée à l'autre. La cuisson se fait sur une grande plaque appelée mitad. La plaque traditionnelle en argile est aujourd'hui souvent électrique. Le dessous reste lisse tandis que le dessus se couvre d'yeux. Selon l'édition anglaise, « the batter ferments for several days before baking ».

La farine de teff la plus claire est réservée aux grandes occasions. Les familles rurales mélangent parfois teff et sorgho.

== Consommation ==

Une injera traditionnelle mesure environ un mètre de diamètre. Elle sert à la fois d'assiette et de couvert pendant le repas. Poser la dernière bouchée est un signe de satiété respecté. Les restes d'injera séchée sont grillés pour préparer le dirkosh. Selon l'édition anglaise, « diners tear pieces of injera to scoop the stews ».
"""

INJERA_RU = """\
Ынджера служит основой почти каждого приёма пищи в Эфиопии. Тесто для ынджеры готовят из муки тефа, мельчайшего злака в мире. As the English edition notes, "the batter ferments for several days before baking".

== Приготовление ==

Закваску хранят в глиняном сосуде и обновляют неделями. Лепёшку пекут всего две-три минуты и только с одной стороны. Готовую лепёшку нельзя переворачивать, иначе она теряет поры.

== Подача ==

Лепёшку расстилают на общем подносе месоб. Правой рукой отрывают кусочки и захватывают ими рагу. Хозяйка кладёт лучший кусок в рот почётному гостю. Этот жест называется гурша и выражает уважение. Сушёную ынджеру подают странникам в дальнюю дорогу.
"""

INJERA_ZH = """\
英杰拉是埃塞俄比亚和厄立特里亚的主食薄饼。它的表面布满气孔，口感松软带酸味。According to the English edition, "stews and salads are served on top of the injera".

== 制作 ==

面糊发酵时会产生天然的乳酸菌。烙饼只需两三分钟，而且只烙一面。传统炉灶使用陶土平盘，现在多改用电热盘。

== 食用 ==

用餐时众人围坐，共享同一张英杰拉。当地人用右手撕下薄饼包裹炖菜。婚宴上的英杰拉要选用最白的苔麸制成。
"""

MOONCAKE_EN = """\
A mooncake is a Chinese bakery product traditionally eaten during the Mid-Autumn Festival. Round shapes symbolize completeness and reunion.

== Fillings ==

Lotus seed paste is considered the original and most luxurious filling. Many regional variants use red bean paste or mixed nuts.
"""

TOPICS = {
    "Peking duck": {
        "en": ("Peking duck", "9100001", PEKING_DUCK_EN),
        "fr": ("Canard laqué de Pékin", "9100002", PEKING_DUCK_FR),
        "ru": ("Утка по-пекински", "9100003", PEKING_DUCK_RU),
        "zh": ("北京烤鸭", "9100004", PEKING_DUCK_ZH),
    },
    "Injera": {
        "en": ("Injera", "9200001", INJERA_EN),
        "fr": ("Injera", "9200002", INJERA_FR),
        "ru": ("Ынджера", "9200003", INJERA_RU),
        "zh": ("英杰拉", "9200004", INJERA_ZH),
    },
    # English-only topic: every target edition is absent by design.
    "Mooncake": {
        "en": ("Mooncake", "9300001", MOONCAKE_EN),
    },
}

# Gap counts the mock pipeline must produce, per topic and language.
EXPECTED_GAPS = {
    "Peking duck": {"fr": 13, "ru": 11, "zh": 14},
    "Injera": {"fr": 14, "ru": 10, "zh": 8},
}
EXPECTED_SELECTED = {
    "Peking duck": {"fr": 10, "ru": 10, "zh": 10},
    "Injera": {"fr": 10, "ru": 10, "zh": 8},
}


def build_article(language: str, title: str, revision: str, raw: str) -> Article:
    sections, paragraphs = parse_extract(raw, language)
    return Article(
        language_code=language,
        title=title,
        revision_id=revision,
        canonical_url=f"https://{language}.wikipedia.org/wiki/{title_slug(title)}",
        sections=sections,
        paragraphs=paragraphs,
    )


def write_articles() -> dict[str, dict[str, Article]]:
    langlinks: dict[str, dict[str, dict[str, str]]] = {"en": {}}
    articles: dict[str, dict[str, Article]] = {}
    for topic, editions in TOPICS.items():
        articles[topic] = {}
        langlinks["en"][topic] = {}
        for language, (title, revision, raw) in editions.items():
            article = build_article(language, title, revision, raw)
            articles[topic][language] = article
            out = FIXTURES / "articles" / language
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{title_slug(title)}.json"
            path.write_text(
                json.dumps(article.to_json_obj(), ensure_ascii=False, indent=2, sort_keys=True)
                + "\n",
                encoding="utf-8",
            )
            if language != "en":
                langlinks["en"][topic][language] = title
    (FIXTURES / "langlinks.json").write_text(
        json.dumps(langlinks, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return articles


def verify(articles: dict[str, dict[str, Article]]) -> None:
    llm = MockLlmProvider()
    embedder = MockEmbeddingProvider()
    ok = True
    for topic, editions in articles.items():
        if topic not in EXPECTED_GAPS:
            continue
        english = editions["en"]
        english_facts = decompose_article(english, llm)
        inventories = {}
        for language in ("fr", "ru", "zh"):
            facts = decompose_article(editions[language], llm)
            _, gap_verdicts = classify_article_pair(english_facts, facts, llm, embedder)
            by_id = {f.id: f for f in facts}
            gaps = tuple((by_id[v.target_fact_id], v.neighbor_set) for v in gap_verdicts)
            inventories[language] = GapInventory(language_code=language, topic=topic, gaps=gaps)
            want = EXPECTED_GAPS[topic][language]
            status = "ok" if len(gaps) == want else f"WANT {want}"
            if len(gaps) != want:
                ok = False
                for fact, _ in gaps:
                    print(f"    gap: {fact.text}")
            print(f"{topic} [{language}]: {len(gaps)} gaps ({status})")
        selected = select_for_topic(inventories, cap=10)
        for language, picks in selected.items():
            want = EXPECTED_SELECTED[topic][language]
            if len(picks) != want:
                ok = False
                print(f"{topic} [{language}]: selected {len(picks)}, want {want}")

        if topic == "Peking duck":
            cixi = [
                entry
                for entry in selected["fr"]
                if "Cixi" in entry[0].text
            ]
            if not cixi:
                ok = False
                print("Cixi fact missing from the French selection")
            else:
                anchor, paragraph_index = anchor_for(
                    cixi[0], english, english_facts, embedder
                )
                if anchor != MING_SENTENCE:
                    ok = False
                    print(f"Cixi anchor is {anchor!r} (paragraph {paragraph_index})")
                else:
                    print(f"Cixi anchor ok (paragraph {paragraph_index})")
    if not ok:
        sys.exit("fixture properties violated; adjust the raw texts")
    print("all fixture properties hold")


if __name__ == "__main__":
    verify(write_articles())
