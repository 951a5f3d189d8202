#ifndef TRANSIT_OPT_H
#define TRANSIT_OPT_H

/* C API of the transit timetable optimization library.
 *
 * All functions return an exit code: 0 ok, 2 usage error, 3 data error,
 * 4 search refused. Diagnostics from the last call on a session are
 * available via topt_last_log / topt_last_error. Sessions and stores are
 * opaque; one session must not be used from two threads at once.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct topt_session topt_session;
typedef struct topt_store topt_store;

topt_session* topt_session_new(void);
void topt_session_free(topt_session* s);

/* Runs one subcommand (ingest, clean, cluster, optimize, sweep, stability,
 * synth, report) with a JSON configuration object. */
int topt_run(topt_session* s, const char* command, const char* config_json);

/* Log and error text of the most recent call; owned by the session, valid
 * until the next call on it. Never NULL. */
const char* topt_last_log(const topt_session* s);
const char* topt_last_error(const topt_session* s);

/* Loads and cleans a dataset for repeated queries. */
int topt_store_open(topt_session* s, const char* schedule_dir, const char* timepoints_csv,
                    topt_store** out);
void topt_store_free(topt_store* st);

/* JSON summary (trips, months, record counts, cleaning report). The returned
 * string must be released with topt_string_free. */
int topt_store_summary(topt_session* s, const topt_store* st, char** json_out);

/* Replays a candidate timetable CSV (trip_id,timepoint_id,scheduled_time)
 * for one trip and returns the on-time performance report as JSON. */
int topt_store_evaluate(topt_session* s, const topt_store* st, const char* trip_id,
                        const char* candidate_csv, int window_early, int window_late,
                        char** json_out);

void topt_string_free(char* str);

const char* topt_version(void);

#ifdef __cplusplus
}
#endif

#endif
