#ifndef KIRBYFORGE_H
#define KIRBYFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes: 0 ok, 1 failed verification, 2 parse, 3 invariant,
 * 4 precondition, 5 integrity, 6 null or invalid argument.
 */
typedef enum KfStatus {
  KfStatus_Ok = 0,
  KfStatus_VerifyFailed = 1,
  KfStatus_ParseError = 2,
  KfStatus_InvariantError = 3,
  KfStatus_PreconditionError = 4,
  KfStatus_IntegrityError = 5,
  KfStatus_BadArgument = 6,
} KfStatus;

/**
 * Opaque diagram handle.
 */
typedef struct KfDiagram KfDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null.  Free with `kf_string_free`.
 */
char *kf_last_error(void);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a kirbyforge function and not yet freed.
 */
void kf_string_free(char *s);

/**
 * Parse a diagram from text.  On success writes a handle to `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be valid.
 */
enum KfStatus kf_diagram_parse(const char *text, struct KfDiagram **out);

/**
 * Free a diagram handle.
 *
 * # Safety
 * `d` must be a handle from `kf_diagram_parse` (or null), not yet freed.
 */
void kf_diagram_free(struct KfDiagram *d);

/**
 * Canonical serialization.  Free the result with `kf_string_free`.
 *
 * # Safety
 * `d` must be a live handle.
 */
char *kf_diagram_serialize(const struct KfDiagram *d);

/**
 * 64-bit FNV-1a hash of the canonical serialization.
 *
 * # Safety
 * `d` must be a live handle.
 */
uint64_t kf_diagram_hash(const struct KfDiagram *d);

/**
 * Genus of the rotation system (0 means planar-realizable).
 *
 * # Safety
 * `d` must be a live handle.
 */
uint32_t kf_diagram_genus(const struct KfDiagram *d);

/**
 * Linking number of two components by id.
 *
 * # Safety
 * `d` and `out` must be valid.
 */
enum KfStatus kf_linking_number(const struct KfDiagram *d,
                                uint32_t comp_a,
                                uint32_t comp_b,
                                int64_t *out);

/**
 * Whether surgery on the framed components yields a homology sphere.
 *
 * # Safety
 * `d` and `out` must be valid.
 */
enum KfStatus kf_is_homology_sphere(const struct KfDiagram *d, bool *out);

/**
 * First homology of the surgered manifold, e.g. "0", "Z", "Z/5 + Z".
 * Free with `kf_string_free`.
 *
 * # Safety
 * `d` must be a live handle.
 */
char *kf_h1_describe(const struct KfDiagram *d);

/**
 * Run the unlinking pipeline.  `check_level` is "linking-only", "level1",
 * or "level2"; on success writes the certificate text to `out_cert`.
 *
 * # Safety
 * Pointers must be valid; free the certificate with `kf_string_free`.
 */
enum KfStatus kf_unlink(const struct KfDiagram *d, const char *check_level, char **out_cert);

/**
 * Re-verify a certificate against its origin diagram: Ok when every report
 * entry recomputes true, VerifyFailed when the recomputation disagrees.
 *
 * # Safety
 * `cert_text` must be a valid string, `origin` a live handle.
 */
enum KfStatus kf_verify(const char *cert_text, const struct KfDiagram *origin);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KIRBYFORGE_H */
