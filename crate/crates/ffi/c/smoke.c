/* Build: cargo build --release -p sst-stego-ffi
 *        cc c/smoke.c -Iinclude ../../target/release/libsst_stego_ffi.a -lpthread -ldl -lm -o smoke
 */
#include <stdio.h>
#include <string.h>

#include "sst_stego.h"

int main(void) {
    SstImage *cover = NULL, *stego = NULL;
    uint8_t msg[1000], back[1000];
    uint64_t state = 1, h = 0, h2 = 0;
    double kl = 0.0;
    SstPath path = {SST_PATH_MODE_KEYED, 12345};

    for (size_t i = 0; i < sizeof msg; i++) msg[i] = sst_splitmix64_next(&state) & 1;

    if (sst_image_generate(SST_COVER_MODEL_SMOOTH, 100, 100, 7, &cover) != SST_STATUS_OK ||
        sst_embed(cover, msg, sizeof msg, 8, 99, path, &stego, &h, &kl) != SST_STATUS_OK ||
        sst_extract(stego, sizeof back, 8, 99, path, back, &h2) != SST_STATUS_OK) {
        fprintf(stderr, "error: %s\n", sst_last_error_message());
        return 1;
    }
    printf("sst-stego %s: h=%llu kl=%.6e roundtrip=%s\n", sst_version(), (unsigned long long)h, kl,
           memcmp(msg, back, sizeof msg) == 0 && h == h2 ? "ok" : "FAILED");
    sst_image_free(stego);
    sst_image_free(cover);
    return memcmp(msg, back, sizeof msg) != 0;
}
