"""Regenerate the bundled synthetic fixture under src/fsci/fixtures/.

    python scripts/make_fixture.py
"""
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "fsci" / "fixtures"
SEED = 20221101

COUNTRIES = [
    ("BRA", "Brazil", "Latin America & Caribbean", "UpperMiddle"),
    ("HTI", "Haiti", "Latin America & Caribbean", "LowerMiddle"),
    ("CHL", "Chile", "Latin America & Caribbean", "High"),
    ("DEU", "Germany", "Northern America & Europe", "High"),
    ("UKR", "Ukraine", "Northern America & Europe", "LowerMiddle"),
    ("USA", "United States", "Northern America & Europe", "High"),
    ("AUS", "Australia", "Oceania", "High"),
    ("PNG", "Papua New Guinea", "Oceania", "LowerMiddle"),
    ("FJI", "Fiji", "Oceania", "UpperMiddle"),
    ("EGY", "Egypt", "Northern Africa & Western Asia", "LowerMiddle"),
    ("TUR", "Turkey", "Northern Africa & Western Asia", "UpperMiddle"),
    ("QAT", "Qatar", "Northern Africa & Western Asia", "High"),
    ("KAZ", "Kazakhstan", "Central Asia", "UpperMiddle"),
    ("KGZ", "Kyrgyzstan", "Central Asia", "LowerMiddle"),
    ("TJK", "Tajikistan", "Central Asia", "LowerMiddle"),
    ("CHN", "China", "Eastern Asia", "UpperMiddle"),
    ("JPN", "Japan", "Eastern Asia", "High"),
    ("MNG", "Mongolia", "Eastern Asia", "LowerMiddle"),
    ("IDN", "Indonesia", "South-eastern Asia", "LowerMiddle"),
    ("THA", "Thailand", "South-eastern Asia", "UpperMiddle"),
    ("SGP", "Singapore", "South-eastern Asia", "High"),
    ("IND", "India", "Southern Asia", "LowerMiddle"),
    ("NPL", "Nepal", "Southern Asia", "LowerMiddle"),
    ("AFG", "Afghanistan", "Southern Asia", "Low"),
    ("KEN", "Kenya", "Sub-Saharan Africa", "LowerMiddle"),
    ("NER", "Niger", "Sub-Saharan Africa", "Low"),
    ("ETH", "Ethiopia", "Sub-Saharan Africa", "Low"),
]
TERRITORIES = [("GUM", "Guam", "Oceania", "High")]

# id, name, unit, theme, domain, direction, weight_key, value_added, decimals, (lo, hi)
INDICATORS = [
    ("cost_healthy_diet", "Cost of a healthy diet", "current PPP US$/person/day", "diets", "Food environments", "lower", "population", "false", 1, (1.9, 6.7)),
    ("fruit_availability", "Availability of fruits", "grams/capita/day", "diets", "Food environments", "higher", "none", "false", 1, (14.3, 999.1)),
    ("upf_retail_value", "Retail value of ultra-processed foods", "current US$/capita", "diets", "Food environments", "lower", "population", "false", 1, (10.8, 1465.5)),
    ("pou", "Prevalence of undernourishment", "% population", "diets", "Food security", "lower", "population", "false", 1, (2.5, 52.2)),
    ("cropland_expansion", "Cropland expansion", "%", "environment", "Land", "lower", "cropland", "false", 1, (-20.0, 80.0)),
    ("ag_gdp_share", "Share of agriculture in GDP", "% GDP", "livelihoods", "Poverty and income", "lower", "gdp", "false", 1, (0.5, 61.3)),
    ("female_landholdings", "Female share of landholdings", "% landholdings", "livelihoods", "Rights", "higher", "land_area", "false", 1, (1.7, 50.5)),
    ("health_food_taxes", "Presence of health-related food taxes", "binary", "governance", "Effective implementation", "higher", "population", "true", 1, None),
    ("disaster_damage_ratio", "Ratio of total damages of all disasters to GDP", "ratio", "resilience", "Exposure to shocks", "lower", "gdp", "false", 2, (0.0, 3.0)),
    ("dietary_sourcing_flexibility", "Dietary sourcing flexibility index", "index", "resilience", "Resilience capacities", "higher", "population", "false", 2, (0.1, 1.0)),
    ("social_capital_index", "Social capital index", "index", "resilience", "Resilience capacities", "higher", "population", "true", 2, (0.1, 0.9)),
    ("agland_species_diversity", "Agricultural land with minimum species diversity", "% agricultural land", "resilience", "Agro- and food diversity", "higher", "agricultural_land_2010", "true", 1, (0.0, 100.0)),
    ("food_price_volatility", "Food price volatility", "unitless", "resilience", "Long-term outcomes", "lower", "none", "true", 2, (0.0, 1.4)),
    ("food_supply_variability", "Food supply variability", "kcal/capita/day", "resilience", "Long-term outcomes", "higher", "none", "false", 1, (6.0, 114.0)),
]


def main():
    rng = np.random.default_rng(SEED)
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "countries.csv", "w", newline="\n") as fh:
        fh.write("iso3,name,region,income_group,un_member\n")
        fh.writelines(f"{iso},{name},{region},{inc},true\n" for iso, name, region, inc in COUNTRIES)
        fh.writelines(f"{iso},{name},{region},{inc},false\n" for iso, name, region, inc in TERRITORIES)
    with open(OUT / "codebook.csv", "w", newline="\n") as fh:
        fh.write("indicator_id,name,unit,theme,domain,direction,weight_key,value_added,decimals\n")
        fh.writelines(",".join(str(x) if "," not in str(x) else f'"{x}"' for x in ind[:9]) + "\n" for ind in INDICATORS)

    rows = []
    isos = [c[0] for c in COUNTRIES]
    for i, iso in enumerate(isos):
        pop = float(rng.uniform(0.5, 300.0))
        gdp = float(rng.uniform(5e6, 5e9))
        for year in range(2015, 2022):
            rows.append((iso, "_population", year, round(pop * (1 + 0.01 * (year - 2015)), 3)))
            rows.append((iso, "_gdp", year, round(gdp * (1 + 0.02 * (year - 2015)), 1)))
        rows.append((iso, "_land_area", 2020, round(float(rng.uniform(500, 9e5)), 1)))
        for year in (2010, 2015):
            rows.append((iso, "_agricultural_land", year, round(float(rng.uniform(100, 5e5)), 1)))
        rows.append((iso, "_cropland", 2019, round(float(rng.uniform(50, 2e5)), 1)))
        gdppc = 135_000.0 if iso == "SGP" else float(rng.uniform(400, 70_000))
        rows.append((iso, "_gdp_per_capita", 2021, round(gdppc, 1)))

        for ind_id, *_rest, (bounds) in [(x[0], x[-1]) for x in INDICATORS]:
            if ind_id == "disaster_damage_ratio":
                n_years = 6 if iso in ("KGZ", "FJI") else (10 if i % 3 else 8)
                years = sorted(rng.choice(np.arange(2012, 2022), size=n_years, replace=False).tolist())
                for y in years:
                    rows.append((iso, ind_id, int(y), round(float(rng.gamma(1.2, 0.4)), 4)))
                if iso == "NPL":
                    rows.append((iso, ind_id, 1955, 0.5))
                continue
            if ind_id == "health_food_taxes":
                rows.append((iso, ind_id, 2021, float(rng.integers(0, 2))))
                continue
            if ind_id == "female_landholdings" and iso in ("NER", "PNG"):
                rows.append((iso, ind_id, 1995, round(float(rng.uniform(2, 30)), 3)))
                continue
            if ind_id == "fruit_availability" and iso == "QAT":
                continue
            lo, hi = bounds
            latest = int(rng.choice([2005, 2012, 2017, 2019, 2020, 2021, 2021, 2022]))
            years = sorted({latest, latest - 3, 1998} if ind_id == "female_landholdings" else {latest, latest - 2})
            for y in years:
                rows.append((iso, ind_id, y, round(float(rng.uniform(lo, hi)), 3)))

    # the territory covers too few indicators to be retained
    rows.append(("GUM", "cost_healthy_diet", 2021, 4.1))
    rows.append(("GUM", "pou", 2020, 3.0))

    rows.sort()
    with open(OUT / "observations.csv", "w", newline="\n") as fh:
        fh.write("iso3,indicator_id,year,value\n")
        for iso, ind, year, value in rows:
            fh.write(f"{iso},{ind},{year},{value!r}\n")
    (OUT / "fixture.cfg").write_text(
        "# bundled synthetic fixture\n"
        "codebook = codebook.csv\n"
        "countries = countries.csv\n"
        "observations = observations.csv\n"
        "min_year = 2000\n"
        "coverage_start = 2000\n"
        "coverage_end = 2021\n"
        "groupings = region,income\n"
        "formats = csv,json\n"
        "loess_span = 0.75\n"
        "loess_degree = 2\n"
    )


if __name__ == "__main__":
    main()
