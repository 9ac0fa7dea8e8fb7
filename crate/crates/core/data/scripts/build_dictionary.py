"""One-off generator for data/dictionaries/disease_demographics.json.

Display forms for zh/es/fr were drafted without native review; see
data/dictionaries/review_status.json.
"""
import json
import pathlib

# id, en display, extra en synonyms, zh, es, fr
DISEASES = [
    ("addisons_disease", "Addison's disease", ["adrenal insufficiency", "hypoadrenalism"], "艾迪生病", "enfermedad de Addison", "maladie d'Addison"),
    ("alzheimers_disease", "Alzheimer's disease", ["alzheimer's", "alzheimers", "alzheimer disease"], "阿尔茨海默病", "enfermedad de Alzheimer", "maladie d'Alzheimer"),
    ("amyotrophic_lateral_sclerosis", "amyotrophic lateral sclerosis", ["als", "lou gehrig's disease", "motor neurone disease"], "肌萎缩侧索硬化症", "esclerosis lateral amiotrófica", "sclérose latérale amyotrophique"),
    ("anemia", "anemia", ["anaemia", "iron deficiency anemia"], "贫血", "anemia", "anémie"),
    ("anxiety_disorder", "anxiety disorder", ["generalized anxiety disorder", "anxiety disorders", "panic disorder"], "焦虑症", "trastorno de ansiedad", "trouble anxieux"),
    ("appendicitis", "appendicitis", [], "阑尾炎", "apendicitis", "appendicite"),
    ("arthritis", "arthritis", ["osteoarthritis", "degenerative joint disease"], "关节炎", "artritis", "arthrite"),
    ("asthma", "asthma", ["asthmatic", "bronchial asthma"], "哮喘", "asma", "asthme"),
    ("attention_deficit_hyperactivity_disorder", "ADHD", ["attention deficit hyperactivity disorder", "attention deficit disorder"], "注意缺陷多动障碍", "TDAH", "TDAH"),
    ("autism", "autism", ["autism spectrum disorder", "autistic disorder", "asperger syndrome"], "自闭症", "autismo", "autisme"),
    ("bipolar_disorder", "bipolar disorder", ["manic depression", "bipolar affective disorder"], "双相情感障碍", "trastorno bipolar", "trouble bipolaire"),
    ("breast_cancer", "breast cancer", ["breast carcinoma", "mammary carcinoma"], "乳腺癌", "cáncer de mama", "cancer du sein"),
    ("bronchitis", "bronchitis", ["chronic bronchitis", "acute bronchitis"], "支气管炎", "bronquitis", "bronchite"),
    ("cardiovascular_disease", "cardiovascular disease", ["heart disease", "cardiovascular diseases", "cvd"], "心血管疾病", "enfermedad cardiovascular", "maladie cardiovasculaire"),
    ("celiac_disease", "celiac disease", ["coeliac disease", "gluten enteropathy"], "乳糜泻", "enfermedad celíaca", "maladie cœliaque"),
    ("cerebral_palsy", "cerebral palsy", [], "脑瘫", "parálisis cerebral", "paralysie cérébrale"),
    ("chlamydia", "chlamydia", ["chlamydial infection"], "衣原体感染", "clamidia", "chlamydia"),
    ("cholera", "cholera", [], "霍乱", "cólera", "choléra"),
    ("chronic_kidney_disease", "chronic kidney disease", ["ckd", "chronic renal failure", "chronic renal disease"], "慢性肾病", "enfermedad renal crónica", "maladie rénale chronique"),
    ("chronic_obstructive_pulmonary_disease", "COPD", ["chronic obstructive pulmonary disease", "emphysema"], "慢性阻塞性肺病", "EPOC", "BPCO"),
    ("cirrhosis", "cirrhosis", ["liver cirrhosis", "hepatic cirrhosis"], "肝硬化", "cirrosis", "cirrhose"),
    ("colorectal_cancer", "colorectal cancer", ["colon cancer", "rectal cancer", "bowel cancer"], "结直肠癌", "cáncer colorrectal", "cancer colorectal"),
    ("coronary_artery_disease", "coronary artery disease", ["coronary heart disease", "ischemic heart disease", "ischaemic heart disease"], "冠状动脉疾病", "enfermedad de las arterias coronarias", "maladie coronarienne"),
    ("covid_19", "COVID-19", ["covid", "sars-cov-2 infection", "coronavirus disease 2019"], "新冠肺炎", "COVID-19", "COVID-19"),
    ("crohns_disease", "Crohn's disease", ["crohn disease", "regional enteritis"], "克罗恩病", "enfermedad de Crohn", "maladie de Crohn"),
    ("cystic_fibrosis", "cystic fibrosis", ["mucoviscidosis"], "囊性纤维化", "fibrosis quística", "mucoviscidose"),
    ("deafness", "deafness", ["hearing loss", "hearing impairment", "deaf"], "耳聋", "sordera", "surdité"),
    ("dementia", "dementia", ["senile dementia", "vascular dementia"], "痴呆症", "demencia", "démence"),
    ("dengue", "dengue", ["dengue fever", "breakbone fever"], "登革热", "dengue", "dengue"),
    ("depression", "depression", ["major depressive disorder", "clinical depression", "depressive disorder"], "抑郁症", "depresión", "dépression"),
    ("diabetes", "diabetes", ["diabetes mellitus", "type 2 diabetes", "type 1 diabetes", "diabetic"], "糖尿病", "diabetes", "diabète"),
    ("down_syndrome", "Down syndrome", ["trisomy 21", "down's syndrome"], "唐氏综合征", "síndrome de Down", "syndrome de Down"),
    ("endocarditis", "endocarditis", ["infective endocarditis", "bacterial endocarditis"], "心内膜炎", "endocarditis", "endocardite"),
    ("endometriosis", "endometriosis", [], "子宫内膜异位症", "endometriosis", "endométriose"),
    ("epilepsy", "epilepsy", ["seizure disorder", "epileptic"], "癫痫", "epilepsia", "épilepsie"),
    ("fibromyalgia", "fibromyalgia", ["fibromyalgia syndrome"], "纤维肌痛", "fibromialgia", "fibromyalgie"),
    ("gastroesophageal_reflux_disease", "GERD", ["gastroesophageal reflux disease", "acid reflux", "gord"], "胃食管反流病", "ERGE", "RGO"),
    ("glaucoma", "glaucoma", [], "青光眼", "glaucoma", "glaucome"),
    ("gonorrhea", "gonorrhea", ["gonorrhoea"], "淋病", "gonorrea", "gonorrhée"),
    ("gout", "gout", ["gouty arthritis"], "痛风", "gota", "goutte"),
    ("graves_disease", "Graves' disease", ["graves disease", "hyperthyroidism"], "格雷夫斯病", "enfermedad de Graves", "maladie de Basedow"),
    ("hemophilia", "hemophilia", ["haemophilia"], "血友病", "hemofilia", "hémophilie"),
    ("hepatitis_b", "hepatitis B", ["hbv infection", "hepatitis b virus infection"], "乙型肝炎", "hepatitis B", "hépatite B"),
    ("hepatitis_c", "hepatitis C", ["hcv infection", "hepatitis c virus infection"], "丙型肝炎", "hepatitis C", "hépatite C"),
    ("herpes", "herpes", ["herpes simplex", "genital herpes"], "疱疹", "herpes", "herpès"),
    ("hiv_aids", "HIV/AIDS", ["hiv", "aids", "human immunodeficiency virus"], "艾滋病", "VIH/SIDA", "VIH/SIDA"),
    ("huntingtons_disease", "Huntington's disease", ["huntington disease", "huntington's chorea"], "亨廷顿病", "enfermedad de Huntington", "maladie de Huntington"),
    ("hypertension", "hypertension", ["high blood pressure", "hypertensive"], "高血压", "hipertensión", "hypertension"),
    ("hypothyroidism", "hypothyroidism", ["underactive thyroid", "hashimoto's thyroiditis"], "甲状腺功能减退症", "hipotiroidismo", "hypothyroïdie"),
    ("influenza", "influenza", ["flu", "seasonal flu"], "流感", "gripe", "grippe"),
    ("irritable_bowel_syndrome", "irritable bowel syndrome", ["ibs", "spastic colon"], "肠易激综合征", "síndrome del intestino irritable", "syndrome de l'intestin irritable"),
    ("kidney_stones", "kidney stones", ["kidney stone", "nephrolithiasis", "renal calculi"], "肾结石", "cálculos renales", "calculs rénaux"),
    ("leukemia", "leukemia", ["leukaemia"], "白血病", "leucemia", "leucémie"),
    ("liver_failure", "liver failure", ["hepatic failure", "acute liver failure"], "肝衰竭", "insuficiencia hepática", "insuffisance hépatique"),
    ("lung_cancer", "lung cancer", ["lung carcinoma", "non-small cell lung cancer"], "肺癌", "cáncer de pulmón", "cancer du poumon"),
    ("lupus", "lupus", ["systemic lupus erythematosus", "sle"], "红斑狼疮", "lupus", "lupus"),
    ("lyme_disease", "Lyme disease", ["lyme borreliosis"], "莱姆病", "enfermedad de Lyme", "maladie de Lyme"),
    ("lymphoma", "lymphoma", ["hodgkin lymphoma", "non-hodgkin lymphoma"], "淋巴瘤", "linfoma", "lymphome"),
    ("malaria", "malaria", [], "疟疾", "malaria", "paludisme"),
    ("measles", "measles", ["rubeola"], "麻疹", "sarampión", "rougeole"),
    ("melanoma", "melanoma", ["malignant melanoma"], "黑色素瘤", "melanoma", "mélanome"),
    ("mental_illness", "mental illness", ["mental disorder", "mental health condition", "psychiatric disorder"], "精神疾病", "enfermedad mental", "maladie mentale"),
    ("migraine", "migraine", ["migraines", "migraine headache"], "偏头痛", "migraña", "migraine"),
    ("multiple_sclerosis", "multiple sclerosis", ["ms"], "多发性硬化症", "esclerosis múltiple", "sclérose en plaques"),
    ("muscular_dystrophy", "muscular dystrophy", ["duchenne muscular dystrophy"], "肌肉萎缩症", "distrofia muscular", "dystrophie musculaire"),
    ("myocardial_infarction", "myocardial infarction", ["heart attack", "mi", "acute myocardial infarction"], "心肌梗死", "infarto de miocardio", "infarctus du myocarde"),
    ("obesity", "obesity", ["obese", "morbid obesity"], "肥胖症", "obesidad", "obésité"),
    ("osteoporosis", "osteoporosis", [], "骨质疏松症", "osteoporosis", "ostéoporose"),
    ("ovarian_cancer", "ovarian cancer", ["ovarian carcinoma"], "卵巢癌", "cáncer de ovario", "cancer de l'ovaire"),
    ("pancreatic_cancer", "pancreatic cancer", ["pancreatic adenocarcinoma"], "胰腺癌", "cáncer de páncreas", "cancer du pancréas"),
    ("parkinsons_disease", "Parkinson's disease", ["parkinson disease", "parkinsonism"], "帕金森病", "enfermedad de Parkinson", "maladie de Parkinson"),
    ("perforated_ulcer", "perforated ulcer", ["perforated peptic ulcer", "ulcer perforation"], "穿孔性溃疡", "úlcera perforada", "ulcère perforé"),
    ("pneumonia", "pneumonia", ["community acquired pneumonia"], "肺炎", "neumonía", "pneumonie"),
    ("polycystic_ovary_syndrome", "polycystic ovary syndrome", ["pcos", "polycystic ovarian syndrome"], "多囊卵巢综合征", "síndrome de ovario poliquístico", "syndrome des ovaires polykystiques"),
    ("prostate_cancer", "prostate cancer", ["prostate carcinoma"], "前列腺癌", "cáncer de próstata", "cancer de la prostate"),
    ("psoriasis", "psoriasis", ["plaque psoriasis"], "银屑病", "psoriasis", "psoriasis"),
    ("rheumatoid_arthritis", "rheumatoid arthritis", [], "类风湿性关节炎", "artritis reumatoide", "polyarthrite rhumatoïde"),
    ("sarcoidosis", "sarcoidosis", [], "结节病", "sarcoidosis", "sarcoïdose"),
    ("schizophrenia", "schizophrenia", ["schizophrenic"], "精神分裂症", "esquizofrenia", "schizophrénie"),
    ("scoliosis", "scoliosis", [], "脊柱侧弯", "escoliosis", "scoliose"),
    ("sepsis", "sepsis", ["septicemia", "septic shock"], "败血症", "sepsis", "septicémie"),
    ("sickle_cell_disease", "sickle cell disease", ["sickle cell anemia", "sickle cell anaemia"], "镰状细胞病", "anemia de células falciformes", "drépanocytose"),
    ("sleep_apnea", "sleep apnea", ["obstructive sleep apnea", "sleep apnoea"], "睡眠呼吸暂停", "apnea del sueño", "apnée du sommeil"),
    ("stroke", "stroke", ["cerebrovascular accident", "brain attack"], "中风", "accidente cerebrovascular", "accident vasculaire cérébral"),
    ("syphilis", "syphilis", [], "梅毒", "sífilis", "syphilis"),
    ("tinnitus", "tinnitus", [], "耳鸣", "acúfenos", "acouphènes"),
    ("tuberculosis", "tuberculosis", ["tb", "pulmonary tuberculosis"], "结核病", "tuberculosis", "tuberculose"),
    ("ulcerative_colitis", "ulcerative colitis", [], "溃疡性结肠炎", "colitis ulcerosa", "rectocolite hémorragique"),
    ("visual_anomalies", "visual anomalies", ["vision loss", "visual impairment", "blindness"], "视觉异常", "anomalías visuales", "anomalies visuelles"),
]

RACE = [
    ("asian", {"en": "Asian", "zh": "亚裔", "es": "asiáticos", "fr": "asiatiques"},
     ["asian", "asian american", "asian americans", "asians", "east asian", "south asian", "southeast asian"]),
    ("black", {"en": "Black", "zh": "黑人", "es": "negros", "fr": "noirs"},
     ["black", "african american", "african americans", "afro american", "blacks"]),
    ("hispanic", {"en": "Hispanic", "zh": "西班牙裔", "es": "hispanos", "fr": "hispaniques"},
     ["hispanic", "hispanics", "latino", "latina", "latinx", "latinos", "latinas"]),
    ("indigenous", {"en": "Indigenous", "zh": "原住民", "es": "indígenas", "fr": "autochtones"},
     ["indigenous", "native american", "native americans", "american indian", "american indians", "alaska native", "first nations"]),
    ("pacific_islander", {"en": "Pacific Islander", "zh": "太平洋岛民", "es": "isleños del Pacífico", "fr": "insulaires du Pacifique"},
     ["pacific islander", "pacific islanders", "native hawaiian", "polynesian", "micronesian", "melanesian"]),
    ("white", {"en": "White", "zh": "白人", "es": "blancos", "fr": "blancs"},
     ["white", "caucasian", "caucasians", "european american", "white american", "whites"]),
]

GENDER = [
    ("female", {"en": "female", "zh": "女性", "es": "femeninos", "fr": "féminins"},
     ["female", "females", "woman", "women", "girl", "girls"]),
    ("male", {"en": "male", "zh": "男性", "es": "masculinos", "fr": "masculins"},
     ["male", "males", "man", "men", "boy", "boys"]),
    ("non_binary", {"en": "non-binary", "zh": "非二元性别", "es": "no binarios", "fr": "non binaires"},
     ["non-binary", "nonbinary", "genderqueer", "enby", "gender non-conforming"]),
]


def disease_concept(row):
    cid, en, extra, zh, es, fr = row
    primary = en.lower()
    syns = [primary] + [s for s in extra if s != primary]
    return {
        "id": cid,
        "display": {"en": en, "zh": zh, "es": es, "fr": fr},
        "synonyms": {"en": syns},
    }


def main():
    assert len(DISEASES) == 89, len(DISEASES)
    ids = [d[0] for d in DISEASES]
    assert len(set(ids)) == len(ids)
    bundle = {
        "version": "1.0.0",
        "diseases": [disease_concept(d) for d in sorted(DISEASES)],
        "race": [{"id": i, "display": d, "synonyms": {"en": s}} for i, d, s in RACE],
        "gender": [{"id": i, "display": d, "synonyms": {"en": s}} for i, d, s in GENDER],
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "dictionaries" / "disease_demographics.json"
    out.write_text(json.dumps(bundle, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
