#ifndef EECLASS_H
#define EECLASS_H

/*
 * C interface to the extremality classification library.
 *
 * Conventions:
 *   - Every fallible function returns an eec_status; on failure,
 *     eec_last_error() holds a message (thread-local, valid until the next
 *     failing call on the same thread).
 *   - Functions returning text through a char** allocate with malloc; free
 *     the result with eec_string_free.
 *   - Handles are opaque; destroy them with the matching *_free function.
 *     Passing NULL to a *_free is a no-op.
 *   - Score kinds:      ei | hi | mei | mhi | fm | hm | rp
 *   - Embedding kinds:  ee-mei | ee-mhi | dd-fm | dd-hm | dd-rp
 *   - Methods:          lda | qda | knn | svm | rf
 *   - Datasets travel as CSV with header `[id,]label,t_1,...,t_m`, one curve
 *     per row: a label token and one decimal value per grid point.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eec_status {
  EEC_OK = 0,
  EEC_ERROR_USAGE = 1,   /* invalid arguments at the API boundary */
  EEC_ERROR_DATA = 2,    /* malformed input data or parameters */
  EEC_ERROR_NUMERIC = 3, /* numerical or internal failure */
  EEC_ERROR_IO = 4       /* file cannot be read or written */
} eec_status;

typedef struct eec_dataset eec_dataset;
typedef struct eec_embedding eec_embedding;
typedef struct eec_model eec_model;

/* Message for the most recent failure on this thread; empty if none. */
const char* eec_last_error(void);

/* Frees a string returned through a char** out parameter. */
void eec_string_free(char* text);

/* Sets the worker thread budget; n <= 0 selects the hardware default.
 * Results never depend on this setting, only wall time does. */
eec_status eec_set_threads(int n);

/* Stream splitting used for all library seeding, exposed so callers can
 * reproduce internally derived seeds. */
unsigned long long eec_derive_seed(unsigned long long seed,
                                   unsigned long long tag);

/* Canonical decimal rendering of a double: shortest form that parses back
 * to the identical value. Free with eec_string_free. */
char* eec_format_double(double value);

/* ---- datasets ---- */

eec_status eec_dataset_read_csv(const char* path, eec_dataset** out);
eec_status eec_dataset_parse_csv(const char* text, eec_dataset** out);

/* Synthetic two-group benchmark data, experiment presets 1-6. Pass 0 for
 * n_per_group or grid_points to keep the defaults (200 and 100). */
eec_status eec_dataset_generate(int experiment, unsigned long long seed,
                                int n_per_group, int grid_points,
                                eec_dataset** out);

eec_status eec_dataset_to_csv(const eec_dataset* data, char** out);
eec_status eec_dataset_write_csv(const eec_dataset* data, const char* path);
eec_status eec_dataset_counts(const eec_dataset* data, int* out_curves,
                              int* out_grid_points);
void eec_dataset_free(eec_dataset* data);

/* ---- per-curve scores ---- */

/* Scores every curve against the whole dataset as its own reference and
 * returns CSV `id,label,value` (row number as id when the data has none).
 * hm_quantile <= 0 and rp_projections <= 0 select the defaults (0.15, 50);
 * rp_seed drives the projection directions for kind rp. */
eec_status eec_scores_csv(const eec_dataset* data, const char* kind,
                          double hm_quantile, int rp_projections,
                          unsigned long long rp_seed, char** out);

/* ---- 2-D embeddings ---- */

/* Embeds every curve of `eval` against the two labeled groups of
 * `reference` (u: group A, v: group B). Pass the same handle twice for the
 * training picture. rp_seed drives dd-rp projections. */
eec_status eec_embed(const eec_dataset* eval, const eec_dataset* reference,
                     const char* kind, unsigned long long rp_seed,
                     eec_embedding** out);
eec_status eec_embedding_points_csv(const eec_embedding* embedding, char** out);
eec_status eec_embedding_svg(const eec_embedding* embedding, int width_px,
                             int height_px, char** out);
void eec_embedding_free(eec_embedding* embedding);

/* ---- classification ---- */

/* Embeds the training data against itself and fits the method on the
 * embedded points. Hyperparameters: pass 0 for the default (k 5, c 1.0,
 * trees 200); gamma 0 means "from the data" (1 / (2 * median squared
 * standardized distance)). Internally the projection seed is
 * eec_derive_seed(seed, 1) and the classifier seed eec_derive_seed(seed, 2).
 * The model keeps the training sample as the frozen embedding reference. */
eec_status eec_model_train(const eec_dataset* train, const char* kind,
                           const char* method, int k, double c, double gamma,
                           int trees, unsigned long long seed, eec_model** out);

/* Predictions for new curves, embedded against the training references.
 * Label tokens are matched by name, so group order may differ between
 * files. CSV `id,label,predicted` with label tokens. */
eec_status eec_model_predictions_csv(const eec_model* model,
                                     const eec_dataset* data, char** out);
eec_status eec_model_accuracy(const eec_model* model, const eec_dataset* data,
                              double* out);
void eec_model_free(eec_model* model);

/* ---- evaluation ---- */

typedef struct eec_cv_summary {
  double mean;
  double sd;
  double q1;
  double median;
  double q3;
  double min;
  double max;
  int folds;           /* effective fold count */
  int requested_folds;
  int clamped;         /* 1 when folds were reduced to the smaller class */
} eec_cv_summary;

/* Stratified k-fold cross-validation of one embedding + method pair.
 * Hyperparameter sentinels as in eec_model_train. */
eec_status eec_crossval(const eec_dataset* data, const char* kind,
                        const char* method, int folds,
                        unsigned long long seed, int k, double c, double gamma,
                        int trees, eec_cv_summary* out);

/* Runs the full experiment grid and writes the report directory: folds.csv
 * (long format `experiment,embedding,method,fold,accuracy`), summary.csv
 * (one aggregated row per experiment x embedding x method), and one
 * exp<N>_<kind>.svg scatter per experiment x kind. List arguments are
 * comma-separated (e.g. "1,2,3", "ee-mei,dd-fm", "lda,knn", "1,2,3,4,5").
 * folds 0 selects the default 10; train_fraction 0 selects 0.8. When
 * out_files is non-NULL it receives the newline-joined list of paths
 * written (free with eec_string_free). Output bytes are identical across
 * runs and thread counts for identical arguments. */
eec_status eec_suite_write_report(const char* experiments, const char* kinds,
                                  const char* methods, const char* seeds,
                                  int folds, double train_fraction,
                                  const char* out_dir, char** out_files);

#ifdef __cplusplus
}
#endif

#endif /* EECLASS_H */
