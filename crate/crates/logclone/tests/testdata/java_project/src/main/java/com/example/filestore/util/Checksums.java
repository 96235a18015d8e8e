package com.example.filestore.util;

import java.util.zip.CRC32;

/**
 * Checksum helpers.
 */
public final class Checksums {

    private Checksums() {
    }

    public static long crc32(byte[] data) {
        CRC32 crc = new CRC32();
        crc.update(data, 0, data.length);
        return crc.getValue();
    }

    public static String crc32Hex(byte[] data) {
        long value = crc32(data);
        StringBuilder sb = new StringBuilder(Long.toHexString(value));
        while (sb.length() < 8) {
            sb.insert(0, '0');
        }
        return sb.toString();
    }

    public static boolean matches(byte[] data, String expectedHex) {
        String actual = crc32Hex(data);
        return actual.equalsIgnoreCase(expectedHex);
    }
}
