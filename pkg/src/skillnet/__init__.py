"""Skill co-occurrence network analysis of job advertisements."""

from .centrality import (
    CentralityRanking,
    CentralityScores,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    top_k,
)
from .community import Partition, louvain, modularity
from .config import PipelineConfig
from .errors import ConvergenceError, CorpusError, GraphError, LexiconError, SkillNetError
from .export import export_graph
from .graph import MacroStats, SkillGraph, build_graph, macro_measures, parse_graph
from .lexicon import Corpus, JobAd, SkillEntry, SkillLexicon, load_corpus, load_lexicon, normalize_text
from .market import ad_coverage, community_profiles, yearly_trend
from .matrix import AdSkillMatrix, build_matrix, match_skills
from .pipeline import run_pipeline

__version__ = "0.1.0"
