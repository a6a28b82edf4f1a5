#ifndef LCWS_H
#define LCWS_H

/* C interface to the lcws library. Every function returns an lcws_status;
 * on failure a human-readable message is available from lcws_last_error()
 * on the calling thread until the next call into the library. Objects are
 * opaque handles released with their matching *_free function; passing NULL
 * to a *_free function is a no-op. */

#include <stddef.h>
#include <stdint.h>

#if defined(LCWS_BUILDING_LIBRARY)
#define LCWS_API __attribute__((visibility("default")))
#else
#define LCWS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcws_status {
    LCWS_OK = 0,
    LCWS_ERR_ARGUMENT = 1,     /* invalid argument or usage */
    LCWS_ERR_ACCESS = 2,       /* key does not satisfy the access policy */
    LCWS_ERR_IO = 3,           /* file or store failure */
    LCWS_ERR_FORMAT = 4,       /* malformed or non-canonical encoding */
    LCWS_ERR_POLICY_SYNTAX = 5,
    LCWS_ERR_NOT_FOUND = 6,    /* unknown message id or object */
    LCWS_ERR_STATE = 7,
    LCWS_ERR_INTERNAL = 8
} lcws_status;

#define LCWS_MESSAGE_ID_BYTES 16
#define LCWS_MESSAGE_ID_HEX 33 /* 32 digits and a terminating NUL */

typedef struct lcws_rng lcws_rng;
typedef struct lcws_public_key lcws_public_key;
typedef struct lcws_master_key lcws_master_key;
typedef struct lcws_secret_key lcws_secret_key;
typedef struct lcws_enc_context lcws_enc_context;
typedef struct lcws_vtuple lcws_vtuple;

LCWS_API const char* lcws_last_error(void);
LCWS_API const char* lcws_status_name(lcws_status status);
LCWS_API const char* lcws_suite_name(void);

/* Buffers and strings handed out by the library. */
LCWS_API void lcws_buffer_free(uint8_t* data);
LCWS_API void lcws_string_free(char* s);

LCWS_API lcws_status lcws_rng_new_system(lcws_rng** out);
LCWS_API lcws_status lcws_rng_new_seeded(uint64_t seed, lcws_rng** out);
LCWS_API void lcws_rng_free(lcws_rng* rng);

/* Trusted authority. */
LCWS_API lcws_status lcws_setup(lcws_rng* rng, lcws_public_key** pk_out, lcws_master_key** mk_out);
LCWS_API lcws_status lcws_keygen(const lcws_public_key* pk, const lcws_master_key* mk, const char* const* attributes,
                                 size_t attribute_count, lcws_rng* rng, lcws_secret_key** out);
LCWS_API lcws_status lcws_enc_context_from_master(const lcws_master_key* mk, lcws_enc_context** out);
LCWS_API lcws_status lcws_secret_key_attribute_count(const lcws_secret_key* sk, size_t* out);

/* Key files. Master keys, secret keys and encryption contexts are written
 * with owner-only permissions. */
LCWS_API lcws_status lcws_public_key_save(const lcws_public_key* pk, const char* path);
LCWS_API lcws_status lcws_public_key_load(const char* path, lcws_public_key** out);
LCWS_API lcws_status lcws_master_key_save(const lcws_master_key* mk, const char* path);
LCWS_API lcws_status lcws_master_key_load(const char* path, lcws_master_key** out);
LCWS_API lcws_status lcws_secret_key_save(const lcws_secret_key* sk, const char* path);
LCWS_API lcws_status lcws_secret_key_load(const char* path, lcws_secret_key** out);
LCWS_API lcws_status lcws_enc_context_save(const lcws_enc_context* ctx, const char* path);
LCWS_API lcws_status lcws_enc_context_load(const char* path, lcws_enc_context** out);
LCWS_API lcws_status lcws_vtuple_save(const lcws_vtuple* v, const char* path);
LCWS_API lcws_status lcws_vtuple_load(const char* path, lcws_vtuple** out);

LCWS_API void lcws_public_key_free(lcws_public_key* pk);
LCWS_API void lcws_master_key_free(lcws_master_key* mk);
LCWS_API void lcws_secret_key_free(lcws_secret_key* sk);
LCWS_API void lcws_enc_context_free(lcws_enc_context* ctx);
LCWS_API void lcws_vtuple_free(lcws_vtuple* v);

/* Policies. */
LCWS_API lcws_status lcws_policy_check(const char* policy, uint32_t* depth_out, uint32_t* leaf_count_out);
LCWS_API lcws_status lcws_policy_normalize(const char* policy, char** out);
LCWS_API lcws_status lcws_synthetic_policy(uint32_t levels, uint32_t leaves, char** out);

LCWS_API lcws_status lcws_message_id_format(const uint8_t id[LCWS_MESSAGE_ID_BYTES], char out[LCWS_MESSAGE_ID_HEX]);
LCWS_API lcws_status lcws_message_id_parse(const char* hex, uint8_t out[LCWS_MESSAGE_ID_BYTES]);

/* Data owner: partitions and encrypts the message level by level and uploads
 * each block to the store as soon as it is produced. `bandwidth` throttles the
 * simulated link in bytes per second; 0 means unthrottled. */
LCWS_API lcws_status lcws_encrypt_to_store(const lcws_public_key* pk, const lcws_enc_context* ctx, const char* policy,
                                           const uint8_t* message, size_t message_len, const char* store_dir,
                                           lcws_rng* rng, double bandwidth, uint8_t id_out[LCWS_MESSAGE_ID_BYTES],
                                           uint32_t* block_count_out);

/* Data receiver: downloads every block of the message and decrypts it.
 * Returns LCWS_ERR_ACCESS when the key does not satisfy the policy. The
 * plaintext is released with lcws_buffer_free. */
LCWS_API lcws_status lcws_decrypt_from_store(const lcws_secret_key* sk, const uint8_t id[LCWS_MESSAGE_ID_BYTES],
                                             const char* store_dir, uint8_t** out, size_t* out_len);

LCWS_API lcws_status lcws_store_block_count(const uint8_t id[LCWS_MESSAGE_ID_BYTES], const char* store_dir,
                                            uint32_t* out);

/* Integrity check: the authority reads the commitment of block 1 from the
 * store and issues a verification tuple; the receiver checks a plaintext
 * against it. `valid_out` is 1 for a match and 0 otherwise. */
LCWS_API lcws_status lcws_challenge(const lcws_master_key* mk, const uint8_t id[LCWS_MESSAGE_ID_BYTES],
                                    const char* store_dir, lcws_rng* rng, lcws_vtuple** out);
LCWS_API lcws_status lcws_verify(const uint8_t* message, size_t message_len, const lcws_vtuple* v, int* valid_out);

typedef struct lcws_bench_config {
    const uint64_t* sizes; /* bytes, strictly increasing */
    size_t size_count;
    uint32_t levels;
    uint32_t leaves;
    double bandwidth; /* bytes per second */
    uint32_t runs;
    uint64_t seed;
} lcws_bench_config;

/* Runs the encryption/transmission and transmission/decryption sweep and
 * writes the CSV report and, when `dat_path` is not NULL, a gnuplot data file. */
LCWS_API lcws_status lcws_bench(const lcws_bench_config* config, const char* csv_path, const char* dat_path,
                                int verbose);

#ifdef __cplusplus
}
#endif

#endif
