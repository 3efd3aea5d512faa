#ifndef TGBS_H
#define TGBS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum TgbsStatus {
  TGBS_STATUS_OK = 0,
  TGBS_STATUS_INVALID_PARAMETER = 1,
  TGBS_STATUS_IO = 2,
  TGBS_STATUS_FORMAT = 3,
  TGBS_STATUS_EMPTY_RESULT = 4,
  TGBS_STATUS_NO_SIGNAL = 5,
  TGBS_STATUS_NUMERIC = 6,
  TGBS_STATUS_EMPTY_SEED = 7,
  TGBS_STATUS_NULL_POINTER = 8,
  TGBS_STATUS_BUFFER_TOO_SMALL = 9,
  TGBS_STATUS_PANIC = 10,
} TgbsStatus;

// Opaque graph handle.
typedef struct TgbsGraph TgbsGraph;

// Opaque embedded-problem handle.
typedef struct TgbsProblem TgbsProblem;

// Opaque sample-batch handle.
typedef struct TgbsSamples TgbsSamples;

// Summary of a search; the subset itself is written to a caller buffer.
typedef struct TgbsSearchResult {
  double score;
  size_t subset_len;
  size_t iterations;
  bool pruned;
  double search_seconds;
} TgbsSearchResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next `tgbs_*` call on the same thread.
const char *tgbs_last_error(void);

// Graph on `n` nodes with edges `(us[i], vs[i])`. `weights` may be null for
// unit edge weights.
enum TgbsStatus tgbs_graph_from_edges(size_t n,
                                      const size_t *us,
                                      const size_t *vs,
                                      const double *weights,
                                      size_t edge_count,
                                      struct TgbsGraph **out);

enum TgbsStatus tgbs_graph_erdos_renyi(size_t n, double p, uint64_t seed, struct TgbsGraph **out);

// Planted dense block; if `planted` is non-null, the block's node indices
// are written to it (capacity `n`) and their count to `planted_len`.
enum TgbsStatus tgbs_graph_planted(size_t n,
                                   double p_dense,
                                   double p_sparse,
                                   double dense_fraction,
                                   uint64_t seed,
                                   size_t *planted,
                                   size_t *planted_len,
                                   struct TgbsGraph **out);

enum TgbsStatus tgbs_graph_read_edge_list(const char *path, struct TgbsGraph **out);

enum TgbsStatus tgbs_graph_write_edge_list(const struct TgbsGraph *g, const char *path);

enum TgbsStatus tgbs_graph_set_node_weights(struct TgbsGraph *g, const double *weights, size_t n);

// Replaces the node weights with uniform `[0, 1)` draws.
enum TgbsStatus tgbs_graph_assign_uniform_weights(struct TgbsGraph *g, uint64_t seed);

// Node count, or 0 for a null handle.
size_t tgbs_graph_node_count(const struct TgbsGraph *g);

// Edge count, or 0 for a null handle.
size_t tgbs_graph_edge_count(const struct TgbsGraph *g);

enum TgbsStatus tgbs_graph_density(const struct TgbsGraph *g,
                                   const size_t *nodes,
                                   size_t len,
                                   double *out);

void tgbs_graph_free(struct TgbsGraph *g);

enum TgbsStatus tgbs_embed(const struct TgbsGraph *g,
                           double mean_photon,
                           double gamma,
                           struct TgbsProblem **out);

// Embeds the weight-aware encoding; the graph needs node weights.
enum TgbsStatus tgbs_embed_weighted(const struct TgbsGraph *g,
                                    double alpha,
                                    double mean_photon,
                                    double gamma,
                                    struct TgbsProblem **out);

size_t tgbs_problem_modes(const struct TgbsProblem *p);

// Σ sinh² r of the programmed squeezing, or NaN for a null handle.
double tgbs_problem_mean_photon(const struct TgbsProblem *p);

// Copies the `modes` squeezing strengths into `out`.
enum TgbsStatus tgbs_problem_squeeze(const struct TgbsProblem *p, double *out, size_t capacity);

enum TgbsStatus tgbs_problem_write_json(const struct TgbsProblem *p, const char *path);

enum TgbsStatus tgbs_problem_read_json(const char *path, struct TgbsProblem **out);

void tgbs_problem_free(struct TgbsProblem *p);

enum TgbsStatus tgbs_sample(const struct TgbsProblem *p,
                            size_t realizations,
                            uint64_t seed,
                            struct TgbsSamples **out);

size_t tgbs_samples_realizations(const struct TgbsSamples *s);

size_t tgbs_samples_modes(const struct TgbsSamples *s);

double tgbs_samples_mean_clicks(const struct TgbsSamples *s);

// Copies the row-major `realizations × modes` 0/1 matrix into `out`.
enum TgbsStatus tgbs_samples_clicks(const struct TgbsSamples *s, uint8_t *out, size_t capacity);

void tgbs_samples_free(struct TgbsSamples *s);

// Densest-k search from `seed`; the result subset goes to `subset_out`.
enum TgbsStatus tgbs_densest_k(const struct TgbsGraph *g,
                               const size_t *seed,
                               size_t seed_len,
                               size_t k,
                               size_t *subset_out,
                               size_t capacity,
                               struct TgbsSearchResult *out);

enum TgbsStatus tgbs_max_clique(const struct TgbsGraph *g,
                                const size_t *seed,
                                size_t seed_len,
                                size_t cycles,
                                uint64_t rng_seed,
                                size_t *subset_out,
                                size_t capacity,
                                struct TgbsSearchResult *out);

enum TgbsStatus tgbs_max_weighted_clique(const struct TgbsGraph *g,
                                         const size_t *seed,
                                         size_t seed_len,
                                         size_t cycles,
                                         uint64_t rng_seed,
                                         size_t *subset_out,
                                         size_t capacity,
                                         struct TgbsSearchResult *out);

// Nodes that clicked in realization `row` of `s`, written to `nodes_out`.
enum TgbsStatus tgbs_samples_row_nodes(const struct TgbsSamples *s,
                                       size_t row,
                                       size_t *nodes_out,
                                       size_t capacity,
                                       size_t *len_out);

enum TgbsStatus tgbs_balanced_accuracy(const size_t *predicted,
                                       const size_t *actual,
                                       size_t len,
                                       size_t classes,
                                       double *out);

// Library version as a static NUL-terminated string.
const char *tgbs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TGBS_H */
