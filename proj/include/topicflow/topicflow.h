/* C interface to the topicflow library.
 *
 * Every function returns a tf_status. On failure the message is available
 * from tf_last_error() on the same thread until the next call. Strings
 * returned through char** outputs are owned by the caller and released with
 * tf_string_free(). Parameter objects are JSON texts; NULL or "" means all
 * defaults, and unknown keys are rejected.
 */
#ifndef TOPICFLOW_H
#define TOPICFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tf_status {
  TF_OK = 0,
  TF_ERR_INVALID_ARGUMENT = 1,
  TF_ERR_IO = 2,
  TF_ERR_PARSE = 3,
  TF_ERR_VALIDATION = 4,
  TF_ERR_NOT_FOUND = 5,
  TF_ERR_NUMERIC = 6,
  TF_ERR_INTERNAL = 99
} tf_status;

typedef struct tf_ontology tf_ontology;
typedef struct tf_corpus tf_corpus;
typedef struct tf_registry tf_registry;
typedef struct tf_embeddings tf_embeddings;
typedef struct tf_graph tf_graph;

const char* tf_last_error(void);
const char* tf_version(void);
void tf_string_free(char* s);
/* 0 = hardware concurrency. Results do not depend on the value. */
void tf_set_threads(unsigned n);

/* format: "edge-csv" or "turtle-subset" */
tf_status tf_ontology_load(const char* path, const char* format, tf_ontology** out);
void tf_ontology_free(tf_ontology* o);
tf_status tf_ontology_size(const tf_ontology* o, size_t* out);
/* TF_ERR_NOT_FOUND when the label is unknown. */
tf_status tf_ontology_canonical(const tf_ontology* o, const char* label, char** out);
/* JSON array of topic ids, sorted. */
tf_status tf_ontology_super_topics(const tf_ontology* o, const char* topic, int transitive,
                                   char** out_json);

tf_status tf_corpus_load(const char* path, tf_corpus** out);
void tf_corpus_free(tf_corpus* c);
tf_status tf_corpus_size(const tf_corpus* c, size_t* out);

/* taxonomy_path may be NULL. */
tf_status tf_registry_load(const char* registry_path, const char* taxonomy_path, tf_registry** out);
void tf_registry_free(tf_registry* r);

tf_status tf_embeddings_load(const char* path, tf_embeddings** out);
void tf_embeddings_free(tf_embeddings* e);

/* Annotation JSONL, one line per document. embeddings may be NULL.
 * params: threshold, top_k, cosine_floor, stopwords_path */
tf_status tf_classify(const tf_ontology* o, const tf_corpus* c, const tf_embeddings* e,
                      const char* params_json, char** out_jsonl);

tf_status tf_graph_build(const tf_ontology* o, const tf_corpus* c, const tf_registry* r,
                         const char* annotations_path, tf_graph** out);
tf_status tf_graph_import(const tf_ontology* o, const tf_corpus* c, const char* triples_path,
                          tf_graph** out);
void tf_graph_free(tf_graph* g);
tf_status tf_graph_export(const tf_graph* g, char** out_triples, size_t* out_count);

/* format: "json" or "table" */
tf_status tf_stats(const tf_graph* g, const char* format, char** out);

/* topics_json: JSON array of labels.
 * params: first_year, last_year, exclude_collaborative */
tf_status tf_trends(const tf_graph* g, const char* topics_json, const char* params_json,
                    char** out_csv);
/* params: exclude_collaborative */
tf_status tf_indexes(const tf_graph* g, const char* topics_json, const char* params_json,
                     char** out_csv);
/* params: threshold, basis ("per_stream" | "all_streams"), exclude_collaborative */
tf_status tf_lags(const tf_graph* g, const char* params_json, char** out_json);
/* params: window_a [first, last], window_b [first, last], top, kinds */
tf_status tf_growing(const tf_graph* g, const char* params_json, char** out_csv);

/* params: start (omit for every window), k, growth_percentile, min_support,
 * min_overlap. gold_path may be NULL; out_networks_csv may be NULL. */
tf_status tf_emergence(const tf_graph* g, const char* params_json, const char* gold_path,
                       char** out_json, char** out_networks_csv);

/* params: window, horizon, emerged_lt, label_gt, non_overlapping,
 * exclude_collaborative, combos, model, folds, seed, learning_rate,
 * iterations, l2, n_trees, max_depth, min_leaf, feature_subsample.
 * out_samples_csv may be NULL. */
tf_status tf_forecast(const tf_graph* g, const char* params_json, char** out_csv,
                      char** out_json, char** out_samples_csv);

/* params: first_year, last_year, min_papers, feature_years, horizon,
 * adopted_at, min_positives and the model keys of tf_forecast.
 * out_cube_csv may be NULL. */
tf_status tf_ttf(const tf_corpus* c, const char* annotations_path, const char* technologies_path,
                 const char* params_json, char** out_csv, char** out_json, char** out_cube_csv);

/* Matching documents as JSONL, in corpus order. */
tf_status tf_filter(const tf_corpus* c, const char* query, char** out_jsonl, size_t* out_count);

/* JSON object mapping report file names to their contents.
 * params: window_a, window_b, top, k, growth_percentile, min_support */
tf_status tf_report(const tf_graph* g, const char* params_json, char** out_bundle_json);

#ifdef __cplusplus
}
#endif

#endif
