/*
 * insim C API: multi-agent satellite inspection simulation.
 *
 * Opaque handles own all library state; every function returns an
 * insim_status. On failure, insim_last_error() describes the most recent
 * error on the calling thread.
 */
#ifndef INSIM_H
#define INSIM_H

#include <stdint.h>

#if defined(_WIN32)
#define INSIM_API __declspec(dllexport)
#else
#define INSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum insim_status {
    INSIM_OK = 0,
    INSIM_ERR_INVALID_ARG = 1,
    INSIM_ERR_PARSE = 2,
    INSIM_ERR_IO = 3,
    INSIM_ERR_DOMAIN = 4,
    INSIM_ERR_STATE = 5,
    INSIM_ERR_SOLVER = 6,
    INSIM_ERR_SIZE = 7,
    INSIM_ERR_INTERNAL = 8
} insim_status;

INSIM_API const char* insim_status_name(insim_status status);

/* Message for the last failure on this thread; valid until the next call. */
INSIM_API const char* insim_last_error(void);

typedef struct insim_config_s insim_config;
typedef struct insim_mission_s insim_mission;

/* ---- mission configuration ---------------------------------------- */

INSIM_API insim_status insim_config_default(insim_config** out);
INSIM_API insim_status insim_config_load(const char* path, insim_config** out);

/* name: "exp1" | "exp2" | "cp-proxy" */
INSIM_API insim_status insim_config_preset(insim_config* config, const char* name);

INSIM_API insim_status insim_config_set_seed(insim_config* config, uint64_t seed);

/* fidelity: "hill" | "twobody-j2" */
INSIM_API insim_status insim_config_set_fidelity(insim_config* config,
                                                 const char* fidelity);
INSIM_API insim_status insim_config_set_rta(insim_config* config, int enabled);

INSIM_API void insim_config_free(insim_config* config);

/* ---- mission execution --------------------------------------------- */

typedef struct insim_metrics {
    int targets_reached;
    double time_taken;            /* s */
    double distance_traveled;     /* m */
    double straight_line_distance; /* m */
    double delta_v;               /* m/s */
} insim_metrics;

INSIM_API insim_status insim_mission_run(const insim_config* config,
                                         insim_mission** out);
INSIM_API insim_status insim_mission_metrics(const insim_mission* mission,
                                             insim_metrics* out);

/* Writes trajectory.csv, guidance.csv, metrics.json, graph.csv. */
INSIM_API insim_status insim_mission_export(const insim_mission* mission,
                                            const char* out_dir);
INSIM_API void insim_mission_free(insim_mission* mission);

/* ---- standalone tools ----------------------------------------------- */

/* Inspection-point CSV (index,x,y,z) for the config's graph. */
INSIM_API insim_status insim_graph_export(const insim_config* config,
                                          const char* path);

typedef struct insim_plan_report {
    double greedy_cost;
    double optimal_cost; /* -1 when the oracle was not requested */
    int covered;         /* oracle plan covers every point (0/1) */
} insim_plan_report;

/* Random seeded routing instance: greedy cost vs exhaustive optimum. */
INSIM_API insim_status insim_plan_compare(int n_points, int n_agents,
                                          uint64_t seed, int run_oracle,
                                          insim_plan_report* out);

/* scenario: "headon" | "speeding". Returns a malloc'd activation trace;
 * release with insim_string_free. */
INSIM_API insim_status insim_rta_demo(const char* scenario, char** text_out);
INSIM_API void insim_string_free(char* text);

/* Recomputes metrics from an exported trajectory CSV (plus the sibling
 * graph.csv when present). */
INSIM_API insim_status insim_metrics_from_csv(const char* trajectory_csv,
                                              double mass, insim_metrics* out);

#ifdef __cplusplus
}
#endif

#endif /* INSIM_H */
