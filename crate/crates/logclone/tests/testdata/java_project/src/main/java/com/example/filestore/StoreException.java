package com.example.filestore;

/**
 * Wraps store-level failures with the key that caused them.
 */
public class StoreException extends RuntimeException {

    private final String key;

    public StoreException(String key, String message, Throwable cause) {
        super(message, cause);
        this.key = key;
    }

    public String getKey() {
        return key;
    }
}
